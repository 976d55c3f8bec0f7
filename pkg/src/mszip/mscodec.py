"""Order-invariant multiset coding via invertible sampling.

Encoding repeatedly samples a symbol from the remaining multiset, by decoding
an index from the ANS state under the frequency distribution of what is left,
removes it, and encodes it under the symbol codec. Each sampling step consumes
from the state about the log of the number of ways the step could have gone,
so across the whole run the consumed bits add up to the log of the number of
distinct orderings and the final state lands at the multiset's information
content instead of the sequence's.

Decoding mirrors the loop in reverse: decode a symbol under the codec, insert
it into the growing frequency tree, and re-encode the sampling index it must
have come from. A clean decode finishes back at the minimal state.

The compressed output depends only on the canonical multiset: any input
ordering of the same symbols produces identical bits.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .ans import L, AnsState, CodeTriple, decode_advance, decode_peek, encode_op, \
    length_bits, state_new
from .errors import ContractError
from .multiset import FreqTree, Multiset, build_balanced

log = logging.getLogger(__name__)

_LN2 = math.log(2)


def encode_multiset(m: Multiset, codec, *, tree: FreqTree | None = None) -> AnsState:
    """Encode ``m`` order-invariantly; every symbol must be codec-encodable.

    ``tree`` may supply a pre-built frequency tree holding exactly the content
    of ``m`` (it is drained in place); by default one is built here.
    """
    s = state_new()
    if tree is None:
        tree = build_balanced(m)
    while (n := tree.total) > 0:
        if s.head < L:
            raise ContractError(
                "coder head left its canonical range before a sampling step; "
                "symbol codec precisions must divide 2**31")
        i = decode_peek(s, n)
        sym, c, p = tree.lookup_and_remove(i)
        s = decode_advance(s, CodeTriple(c, p, n))
        s = codec.encode(s, sym)
    return s


def decode_multiset(s: AnsState, size, codec, *, tree: FreqTree | None = None) -> Multiset:
    """Rebuild the multiset of ``size`` symbols from a state made by
    ``encode_multiset`` with the same codec."""
    if tree is None:
        tree = FreqTree()
    for _ in range(size):
        s, sym = codec.decode(s)
        c, p = tree.insert_and_lookup(sym)
        s = encode_op(s, CodeTriple(c, p, tree.total))
    if s != state_new():
        log.warning(
            "decode finished with a non-minimal residual state "
            "(head=%#x, %d bits); input may not match the codec",
            s.head, length_bits(s))
    return tree.to_multiset()


def permutation_bits(m: Multiset) -> float:
    """log2 of the number of distinct orderings, |M|! / prod(count!)."""
    bits = math.lgamma(m.total + 1)
    for _, cnt in m.pairs:
        bits -= math.lgamma(cnt + 1)
    return bits / _LN2


def info_content(m: Multiset, codec) -> float:
    """Optimal code length for ``m`` in bits under the codec's symbol model.

    Computed in log space; the per-symbol term uses ``codec.bits`` so any
    codec with an ideal-length method works, not just categoricals.
    """
    sym_bits = math.fsum(cnt * codec.bits(sym) for sym, cnt in m.pairs)
    return sym_bits - permutation_bits(m)


@dataclass(frozen=True)
class RateReport:
    """Measured compression accounting for one multiset and codec."""

    compressed_bits: int
    info_content_bits: float
    sequence_bits: int
    savings_bits: int
    permutation_bits: float


def rate_report(m: Multiset, codec) -> RateReport:
    """Measure multiset coding against keeping the canonical order."""
    seq = state_new()
    for sym in m.expand():
        seq = codec.encode(seq, sym)
    sequence_bits = length_bits(seq)
    compressed_bits = length_bits(encode_multiset(m, codec))
    return RateReport(
        compressed_bits=compressed_bits,
        info_content_bits=info_content(m, codec),
        sequence_bits=sequence_bits,
        savings_bits=sequence_bits - compressed_bits,
        permutation_bits=permutation_bits(m),
    )
