"""Benchmark harness: synthetic multisets and JSON collections, CSV out.

Synthetic runs draw a skewed source from a Dirichlet prior with concentration
alpha_k = k over the alphabet, generate a multiset with an exact number of
unique symbols, and measure rate and wall time for a full encode + decode.
Timing covers tree build, sampling, and coding; data generation, codec
construction, and I/O are excluded. Everything is seed-deterministic, so a
repeated run reproduces every column except the time ones.

The fixed-unique-count generator works support-first: it picks the support of
``unique`` distinct symbols by weighted sampling without replacement (Gumbel
top-k), puts one count on each, then distributes the remaining draws i.i.d.
from the source restricted and renormalized to the support.
"""

from __future__ import annotations

import csv
import sys
import time
from dataclasses import dataclass

import numpy as np

from .ans import length_bits, state_new
from .errors import ContractError
from .mscodec import decode_multiset, encode_multiset, info_content
from .multiset import FreqTree, Multiset, build_balanced
from .nested import NestedMultiset, PairCodec, decode_nested, encode_nested, \
    ingest_json_records, nested_savings_bound, sequence_state
from .symbols import QuantizedCategorical

SYNTHETIC_COLUMNS = [
    "alphabet_size", "multiset_size", "unique_symbols", "repetition", "seed",
    "precision", "compressed_bits", "info_bits", "sequence_bits", "savings_bits",
    "encode_s", "decode_s", "encoder_visits", "encoder_ops", "decoder_visits",
    "decoder_ops",
]

JSON_COLUMNS = [
    "records", "pairs", "repetition", "compressed_bits", "sequence_bits",
    "savings_bits", "bound_bits", "savings_ratio", "encode_s", "decode_s",
]


@dataclass
class BenchConfig:
    """Synthetic sweep: alphabet sizes x multiset sizes x repetitions."""

    unique_symbols: int = 512
    sizes: tuple = (1 << 13,)
    alphabet_sizes: tuple = (1 << 10,)
    seed: int = 0
    repetitions: int = 1

    def validate(self):
        if self.repetitions < 1:
            raise ContractError("repetitions must be >= 1")
        for a in self.alphabet_sizes:
            if self.unique_symbols > a:
                raise ContractError(
                    f"cannot place {self.unique_symbols} unique symbols in an "
                    f"alphabet of {a}")
        for s in self.sizes:
            if self.unique_symbols > s:
                raise ContractError(
                    f"cannot fit {self.unique_symbols} unique symbols in a "
                    f"multiset of {s}")


def gen_dirichlet_source(alphabet_size: int, seed) -> np.ndarray:
    """Skewed pmf over [0, alphabet_size) from Dirichlet(alpha_k = k).

    Drawn as independent Gamma(k) variates normalized to sum one, with
    numpy's default_rng(seed) as the documented generator.
    """
    if alphabet_size < 1:
        raise ContractError("alphabet must have at least one symbol")
    rng = np.random.default_rng(seed)
    w = rng.standard_gamma(np.arange(1, alphabet_size + 1, dtype=np.float64))
    w = np.maximum(w, 1e-300)  # guard against gamma underflow at alpha=1
    return w / w.sum()


def gen_fixed_unique_multiset(pmf: np.ndarray, unique: int, size: int, seed) -> Multiset:
    """Multiset of ``size`` symbols with exactly ``unique`` distinct ones."""
    n = len(pmf)
    if not 1 <= unique <= n:
        raise ContractError(f"unique count {unique} outside [1, {n}]")
    if size < unique:
        raise ContractError(f"multiset size {size} below unique count {unique}")
    rng = np.random.default_rng(seed)
    keys = np.log(pmf) + rng.gumbel(size=n)
    support = np.argpartition(-keys, unique - 1)[:unique] if unique < n \
        else np.arange(n)
    counts = np.ones(unique, dtype=np.int64)
    extra = size - unique
    if extra:
        w = pmf[support]
        draws = rng.choice(unique, size=extra, p=w / w.sum())
        counts += np.bincount(draws, minlength=unique)
    order = np.argsort(support)
    return Multiset((int(support[k]), int(counts[k])) for k in order)


def _precision_for(alphabet_size: int) -> int:
    """Power-of-two precision with headroom over the alphabet, min mass >= 1."""
    return 1 << min(24, max(16, alphabet_size.bit_length() + 1))


def _subseed(*parts) -> np.random.SeedSequence:
    return np.random.SeedSequence(list(parts))


def synthetic_rows(cfg: BenchConfig) -> list[dict]:
    cfg.validate()
    rows = []
    for a in cfg.alphabet_sizes:
        pmf = gen_dirichlet_source(a, _subseed(cfg.seed, a))
        precision = _precision_for(a)
        codec = QuantizedCategorical.from_weights(range(a), pmf, precision)
        for size in cfg.sizes:
            for rep in range(cfg.repetitions):
                m = gen_fixed_unique_multiset(
                    pmf, cfg.unique_symbols, size, _subseed(cfg.seed, a, size, rep))

                t0 = time.perf_counter()
                etree = build_balanced(m)
                state = encode_multiset(m, codec, tree=etree)
                encode_s = time.perf_counter() - t0

                dtree = FreqTree()
                t0 = time.perf_counter()
                out = decode_multiset(state, size, codec, tree=dtree)
                decode_s = time.perf_counter() - t0
                if out != m:
                    raise RuntimeError("round-trip mismatch in benchmark")

                seq = state_new()
                for sym in m.expand():
                    seq = codec.encode(seq, sym)
                compressed = length_bits(state)
                sequence = length_bits(seq)
                rows.append({
                    "alphabet_size": a,
                    "multiset_size": size,
                    "unique_symbols": cfg.unique_symbols,
                    "repetition": rep,
                    "seed": cfg.seed,
                    "precision": precision,
                    "compressed_bits": compressed,
                    "info_bits": round(info_content(m, codec), 3),
                    "sequence_bits": sequence,
                    "savings_bits": sequence - compressed,
                    "encode_s": round(encode_s, 6),
                    "decode_s": round(decode_s, 6),
                    "encoder_visits": etree.visits,
                    "encoder_ops": etree.ops,
                    "decoder_visits": dtree.visits,
                    "decoder_ops": dtree.ops,
                })
    return rows


def default_prefixes(n: int) -> list[int]:
    """Doubling prefixes of a record collection, always ending at n."""
    ks = []
    k = 8
    while k < n:
        ks.append(k)
        k *= 2
    if n >= 1:
        ks.append(n)
    return ks


def json_rows(text, repetitions: int = 1, prefixes=None, max_len=None) -> list[dict]:
    """Measure nested compression on growing prefixes of a JSON collection."""
    records = ingest_json_records(text)
    if not records:
        raise ContractError("no records to benchmark")
    if max_len is None:
        max_len = max((len(f) for r in records for p in r.pairs.expand() for f in p),
                      default=0)
    pc = PairCodec(max_len)
    rows = []
    for k in prefixes if prefixes is not None else default_prefixes(len(records)):
        nm = NestedMultiset.from_records(records[:k])
        bound = nested_savings_bound(nm)
        sequence = length_bits(sequence_state(nm, pc))
        for rep in range(repetitions):
            t0 = time.perf_counter()
            state, sizes = encode_nested(nm, pc)
            encode_s = time.perf_counter() - t0
            t0 = time.perf_counter()
            back = decode_nested(state, list(reversed(sizes)), pc)
            decode_s = time.perf_counter() - t0
            if back != nm:
                raise RuntimeError("nested round-trip mismatch in benchmark")
            compressed = length_bits(state)
            savings = sequence - compressed
            rows.append({
                "records": nm.outer_size,
                "pairs": nm.pair_count,
                "repetition": rep,
                "compressed_bits": compressed,
                "sequence_bits": sequence,
                "savings_bits": savings,
                "bound_bits": round(bound, 3),
                "savings_ratio": round(savings / bound, 6) if bound else 0.0,
                "encode_s": round(encode_s, 6),
                "decode_s": round(decode_s, 6),
            })
    return rows


def write_csv(rows: list[dict], columns: list[str], path=None):
    """Write rows to ``path``, or stdout when no path is given."""
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if path:
            out.close()
