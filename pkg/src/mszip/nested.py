"""Two-level multisets: collections of records that are themselves multisets.

A ``Record`` is a multiset of (key, value) byte-string pairs with a canonical
serialized identity; a ``NestedMultiset`` is an outer multiset of records.
Encoding is depth-first: sample a record from the outer multiset without
replacement, then sample and encode its pairs until the record is depleted,
and repeat until the outer multiset is empty. Nothing about the input order
of records or of pairs inside a record survives into the output.

Decoding needs the shape (how many pairs each sampled record had, in the order
they were depleted); the container header carries it.

``ingest_json`` maps the supported JSON subset, an array of flat objects with
scalar values, onto this structure by casting every key and value to its
UTF-8 string form.
"""

from __future__ import annotations

import json
import logging
import math

from .ans import L, AnsState, CodeTriple, decode_advance, decode_peek, encode_op, \
    state_new
from .errors import ContractError, IngestError
from .multiset import FreqTree, Multiset, build_balanced
from .symbols import ByteStringCodec
from .varint import encode_uvarint

log = logging.getLogger(__name__)

_LN2 = math.log(2)


class Record:
    """Inner multiset of (key, value) byte pairs with a canonical identity.

    Records order and compare by their canonical serialization (pairs sorted,
    fields length-prefixed, multiplicities included), so equal contents mean
    equal records no matter how they were assembled.
    """

    __slots__ = ("pairs", "key")

    def __init__(self, pairs):
        ms = pairs if isinstance(pairs, Multiset) else Multiset.from_iterable(pairs)
        for sym, _ in ms.pairs:
            if not (isinstance(sym, tuple) and len(sym) == 2
                    and isinstance(sym[0], bytes) and isinstance(sym[1], bytes)):
                raise ContractError(f"record pairs must be (bytes, bytes), got {sym!r}")
        parts = []
        for (k, v), cnt in ms.pairs:
            parts.append(encode_uvarint(cnt))
            parts.append(encode_uvarint(len(k)))
            parts.append(k)
            parts.append(encode_uvarint(len(v)))
            parts.append(v)
        self.pairs = ms
        self.key = b"".join(parts)

    def __lt__(self, other):
        return self.key < other.key

    def __gt__(self, other):
        return self.key > other.key

    def __eq__(self, other):
        return isinstance(other, Record) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Record({list(self.pairs.pairs)!r})"


class NestedMultiset:
    """Outer multiset whose symbols are Records."""

    __slots__ = ("records",)

    def __init__(self, records: Multiset):
        for sym, _ in records.pairs:
            if not isinstance(sym, Record):
                raise ContractError(f"outer symbols must be Records, got {sym!r}")
        self.records = records

    @classmethod
    def from_records(cls, records) -> "NestedMultiset":
        return cls(Multiset.from_iterable(records))

    @property
    def outer_size(self) -> int:
        return self.records.total

    @property
    def pair_count(self) -> int:
        return sum(cnt * rec.pairs.total for rec, cnt in self.records.pairs)

    def __eq__(self, other):
        return isinstance(other, NestedMultiset) and self.records == other.records

    def __hash__(self):
        return hash(self.records)

    def __repr__(self):
        return f"NestedMultiset({self.outer_size} records, {self.pair_count} pairs)"


class PairCodec:
    """Codec for (key, value) byte-string pairs: one byte-string code each."""

    __slots__ = ("strings",)

    def __init__(self, max_len=255):
        self.strings = ByteStringCodec(max_len)

    @property
    def max_len(self) -> int:
        return self.strings.max_len

    def encode(self, state, pair):
        k, v = pair
        state = self.strings.encode(state, v)
        return self.strings.encode(state, k)

    def decode(self, state):
        state, k = self.strings.decode(state)
        state, v = self.strings.decode(state)
        return state, (k, v)

    def bits(self, pair) -> float:
        return self.strings.bits(pair[0]) + self.strings.bits(pair[1])


def encode_nested(nm: NestedMultiset, pair_codec) -> tuple[AnsState, list[int]]:
    """Depth-first nested encode.

    Returns the final state and the inner sizes in the order the records were
    depleted; decode needs those sizes (reversed) to rebuild the structure.
    """
    s = state_new()
    outer = build_balanced(nm.records)
    sizes = []
    while (n := outer.total) > 0:
        if s.head < L:
            raise ContractError(
                "coder head left its canonical range before a sampling step")
        i = decode_peek(s, n)
        rec, c, p = outer.lookup_and_remove(i)
        s = decode_advance(s, CodeTriple(c, p, n))
        inner = build_balanced(rec.pairs)
        sizes.append(inner.total)
        while (ni := inner.total) > 0:
            j = decode_peek(s, ni)
            pair, ci, pi = inner.lookup_and_remove(j)
            s = decode_advance(s, CodeTriple(ci, pi, ni))
            s = pair_codec.encode(s, pair)
    return s, sizes


def decode_nested(s: AnsState, inner_sizes, pair_codec) -> NestedMultiset:
    """Inverse of ``encode_nested``; ``inner_sizes`` must be in decode order
    (the reverse of the sizes list the encoder produced)."""
    outer = FreqTree()
    for size in inner_sizes:
        inner = FreqTree()
        for _ in range(size):
            s, pair = pair_codec.decode(s)
            c, p = inner.insert_and_lookup(pair)
            s = encode_op(s, CodeTriple(c, p, inner.total))
        rec = Record(inner.to_multiset())
        c, p = outer.insert_and_lookup(rec)
        s = encode_op(s, CodeTriple(c, p, outer.total))
    if s != state_new():
        log.warning("nested decode finished with a non-minimal residual state")
    return NestedMultiset(outer.to_multiset())


def sequence_state(nm: NestedMultiset, pair_codec) -> AnsState:
    """Order-keeping baseline: encode every pair of every record, no sampling."""
    s = state_new()
    for rec, cnt in nm.records.pairs:
        for _ in range(cnt):
            for pair in rec.pairs.expand():
                s = pair_codec.encode(s, pair)
    return s


def nested_savings_bound(nm: NestedMultiset) -> float:
    """Upper bound on the bits recoverable by forgetting order at both levels:
    log2(outer!) plus log2(pairs!) summed over record instances."""
    bits = math.lgamma(nm.records.total + 1)
    for rec, cnt in nm.records.pairs:
        bits += cnt * math.lgamma(rec.pairs.total + 1)
    return bits / _LN2


class _JsonObject:
    __slots__ = ("pairs",)

    def __init__(self, pairs):
        self.pairs = pairs


def _scalar_text(value) -> str:
    if isinstance(value, str):
        return value
    if value is True:
        return "true"
    if value is False:
        return "false"
    if value is None:
        return "null"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    raise TypeError(f"unsupported scalar {value!r}")


def ingest_json_records(text) -> list[Record]:
    """Parse a JSON array of flat objects into Records, preserving input order.

    Keys and values are coerced to UTF-8 strings (integers in decimal,
    booleans as "true"/"false", null as "null"); duplicate keys inside one
    object are kept with their multiplicity.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise IngestError("invalid UTF-8", position=f"byte {e.start}") from None
    try:
        doc = json.loads(text, object_pairs_hook=_JsonObject)
    except json.JSONDecodeError as e:
        raise IngestError(e.msg, position=f"line {e.lineno} column {e.colno}") from None
    if not isinstance(doc, list):
        raise IngestError("top-level value must be an array", position="document root")
    records = []
    for idx, item in enumerate(doc):
        if not isinstance(item, _JsonObject):
            raise IngestError("array items must be objects", position=f"record {idx}")
        pairs = []
        for k, v in item.pairs:
            if isinstance(v, (_JsonObject, list)):
                raise IngestError("nested objects/arrays are not supported",
                                  position=f"record {idx}, key {k!r}")
            pairs.append((k.encode("utf-8"), _scalar_text(v).encode("utf-8")))
        records.append(Record(pairs))
    return records


def ingest_json(text) -> NestedMultiset:
    """Canonical nested multiset of a JSON array of flat objects."""
    return NestedMultiset.from_records(ingest_json_records(text))


def canonical_json(nm: NestedMultiset) -> str:
    """Serialize back to JSON text in canonical order, all values as strings."""
    recs = []
    for rec, cnt in nm.records.pairs:
        fields = ",".join(
            f"{json.dumps(k.decode('utf-8'))}:{json.dumps(v.decode('utf-8'))}"
            for k, v in rec.pairs.expand())
        recs.extend(["{" + fields + "}"] * cnt)
    return "[" + ",".join(recs) + "]"
