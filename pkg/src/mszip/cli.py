"""Command-line interface: compress, decompress, info, and benchmarks."""

from __future__ import annotations

import hashlib
from pathlib import Path

import click

from . import bench as bench_mod
from .ans import deserialize, length_bits, serialize
from .container import (CODEC_BYTES, CODEC_CATEGORICAL, KIND_FLAT, KIND_NESTED,
                        Container, codec_blob, codec_from_blob, pack, unpack)
from .errors import MszipError
from .mscodec import decode_multiset, encode_multiset, info_content, rate_report
from .multiset import Multiset
from .nested import NestedMultiset, PairCodec, canonical_json, decode_nested, \
    encode_nested, ingest_json_records, nested_savings_bound, sequence_state
from .symbols import ByteStringCodec, QuantizedCategorical


@click.group()
def main():
    """Order-invariant multiset compression."""


def _int_list(_ctx, _param, value):
    if value is None:
        return None
    try:
        return tuple(int(v) for v in value.split(",") if v)
    except ValueError:
        raise click.BadParameter("expected a comma-separated list of integers")


@main.command()
@click.argument("inputs", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-o", "--output", required=True, type=click.Path(path_type=Path),
              help="Container file to write.")
@click.option("--codec", "codec_name", type=click.Choice(["bytes", "categorical"]),
              default="bytes", show_default=True)
@click.option("--precision", type=int, default=16, show_default=True,
              help="Categorical precision exponent k (masses sum to 2^k).")
@click.option("--max-len", type=int, default=None,
              help="Max payload bytes for the bytes codec (default: fit inputs; "
                   "rounded up to 2^k - 1).")
@click.option("--nested", is_flag=True,
              help="Treat the single input as a JSON array of flat objects.")
def compress(inputs, output, codec_name, precision, max_len, nested):
    """Compress input files (one symbol each), or one JSON file with --nested."""
    try:
        if nested:
            if len(inputs) != 1:
                raise click.UsageError("--nested takes exactly one JSON input file")
            if codec_name != "bytes":
                raise click.UsageError("--nested requires the bytes codec")
            records = ingest_json_records(inputs[0].read_bytes())
            nm = NestedMultiset.from_records(records)
            if max_len is None:
                max_len = max((len(f) for r in records
                               for p in r.pairs.expand() for f in p), default=0)
            pc = PairCodec(max_len)
            state, sizes = encode_nested(nm, pc)
            codec_id, blob = codec_blob(pc)
            data = pack(Container(kind=KIND_NESTED, codec_id=codec_id,
                                  codec_blob=blob, size=nm.outer_size,
                                  inner_sizes=tuple(sizes),
                                  state=serialize(state)))
            output.write_bytes(data)
            compressed = length_bits(state)
            sequence = length_bits(sequence_state(nm, pc))
            bound = nested_savings_bound(nm)
            click.echo(f"records: {nm.outer_size} ({nm.pair_count} pairs)")
            click.echo(f"compressed_bits: {compressed}")
            click.echo(f"sequence_bits: {sequence}")
            click.echo(f"savings_bits: {sequence - compressed} "
                       f"(bound {bound:.1f})")
        else:
            payloads = [p.read_bytes() for p in inputs]
            m = Multiset.from_iterable(payloads)
            if codec_name == "bytes":
                if max_len is None:
                    max_len = max((len(p) for p in payloads), default=0)
                codec = ByteStringCodec(max_len)
            else:
                alphabet = [sym for sym, _ in m.pairs]
                weights = [cnt for _, cnt in m.pairs]
                codec = QuantizedCategorical.from_weights(
                    alphabet, weights, 1 << precision)
            state = encode_multiset(m, codec)
            codec_id, blob = codec_blob(codec)
            data = pack(Container(kind=KIND_FLAT, codec_id=codec_id,
                                  codec_blob=blob, size=m.total, inner_sizes=(),
                                  state=serialize(state)))
            output.write_bytes(data)
            report = rate_report(m, codec)
            click.echo(f"symbols: {m.total} ({m.unique} unique)")
            click.echo(f"compressed_bits: {report.compressed_bits}")
            click.echo(f"info_content_bits: {report.info_content_bits:.1f}")
            click.echo(f"sequence_bits: {report.sequence_bits}")
            click.echo(f"savings_bits: {report.savings_bits}")
        click.echo(f"container_bytes: {len(data)}")
    except MszipError as e:
        raise click.ClickException(str(e))


@main.command()
@click.argument("container", type=click.Path(exists=True, dir_okay=False,
                                             path_type=Path))
@click.option("-o", "--outdir", required=True, type=click.Path(file_okay=False,
                                                               path_type=Path),
              help="Directory for the reconstructed symbols.")
def decompress(container, outdir):
    """Rebuild the multiset from a container.

    Flat containers become one file per symbol occurrence, named by content
    hash (order is meaningless by construction). Nested containers become
    records.json in canonical form.
    """
    try:
        c = unpack(container.read_bytes())
        codec = codec_from_blob(c.kind, c.codec_id, c.codec_blob)
        state = deserialize(c.state)
        if c.kind == KIND_NESTED:
            nm = decode_nested(state, list(reversed(c.inner_sizes)), codec)
            outdir.mkdir(parents=True, exist_ok=True)
            (outdir / "records.json").write_text(canonical_json(nm))
            click.echo(f"wrote records.json ({nm.outer_size} records)")
        else:
            m = decode_multiset(state, c.size, codec)
            outdir.mkdir(parents=True, exist_ok=True)
            written = 0
            for payload, cnt in m.pairs:
                digest = hashlib.sha256(payload).hexdigest()[:32]
                if cnt == 1:
                    (outdir / f"{digest}.bin").write_bytes(payload)
                else:
                    for k in range(cnt):
                        (outdir / f"{digest}.{k}.bin").write_bytes(payload)
                written += cnt
            click.echo(f"wrote {written} files ({m.unique} unique)")
    except UnicodeDecodeError:
        raise click.ClickException("nested payload is not valid UTF-8 JSON")
    except MszipError as e:
        raise click.ClickException(str(e))


@main.command()
@click.argument("container", type=click.Path(exists=True, dir_okay=False,
                                             path_type=Path))
def info(container):
    """Print a container's header without decoding it."""
    try:
        c = unpack(container.read_bytes())
    except MszipError as e:
        raise click.ClickException(str(e))
    kind = "nested" if c.kind == KIND_NESTED else "flat"
    codec = {CODEC_BYTES: "bytes", CODEC_CATEGORICAL: "categorical"}.get(
        c.codec_id, f"unknown({c.codec_id})")
    click.echo(f"kind: {kind}")
    click.echo(f"codec: {codec}")
    click.echo(f"count: {c.size}")
    if c.kind == KIND_NESTED:
        click.echo(f"pairs: {sum(c.inner_sizes)}")
    click.echo(f"state_bits: {len(c.state) * 8}")
    click.echo("checksum: ok")


@main.command("bench-synthetic")
@click.option("--unique", type=int, default=512, show_default=True,
              help="Exact number of unique symbols per multiset.")
@click.option("--sizes", callback=_int_list, default="8192", show_default=True,
              help="Comma-separated multiset sizes.")
@click.option("--alphabets", callback=_int_list, default="1024", show_default=True,
              help="Comma-separated alphabet sizes.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--reps", type=int, default=1, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None,
              help="Write CSV here instead of stdout.")
def bench_synthetic(unique, sizes, alphabets, seed, reps, csv_path):
    """Rate and timing sweep over synthetic Dirichlet-skewed multisets."""
    cfg = bench_mod.BenchConfig(unique_symbols=unique, sizes=sizes,
                                alphabet_sizes=alphabets, seed=seed,
                                repetitions=reps)
    try:
        rows = bench_mod.synthetic_rows(cfg)
    except MszipError as e:
        raise click.ClickException(str(e))
    bench_mod.write_csv(rows, bench_mod.SYNTHETIC_COLUMNS, csv_path)
    if csv_path:
        click.echo(f"wrote {len(rows)} rows to {csv_path}")


@main.command("bench-json")
@click.argument("json_file", type=click.Path(exists=True, dir_okay=False,
                                             path_type=Path))
@click.option("--reps", type=int, default=1, show_default=True)
@click.option("--prefixes", callback=_int_list, default=None,
              help="Comma-separated prefix sizes (default: doubling).")
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None,
              help="Write CSV here instead of stdout.")
def bench_json(json_file, reps, prefixes, csv_path):
    """Nested-compression savings on growing prefixes of a JSON collection."""
    try:
        rows = bench_mod.json_rows(json_file.read_bytes(), repetitions=reps,
                                   prefixes=prefixes)
    except MszipError as e:
        raise click.ClickException(str(e))
    bench_mod.write_csv(rows, bench_mod.JSON_COLUMNS, csv_path)
    if csv_path:
        click.echo(f"wrote {len(rows)} rows to {csv_path}")


if __name__ == "__main__":
    main()
