"""Command-line entry point: ``dwtembed <subcommand> [flags]``.

Exit codes: 0 success, 1 usage error, 2 data/file error. Results go to
stdout, warnings (OOV counts, skipped lines) to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .compress import DEFAULT_FILTER, CompressionSpec, compress_table, output_dim, parse_paths
from .embeddings import EmbeddingTable, load_embeddings, save_embeddings
from .evaluation import (
    eval_categorization,
    eval_sts,
    eval_word_similarity,
    knn,
    load_categorization,
    load_sts,
    load_wordsim,
)
from .sentence import SentenceEncoderConfig, encode_tokens, lookup_tokens
from .wavelet import FILTER_NAMES, make_filter

DEFAULT_SEED = 1234

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _paths_arg(text: str) -> tuple[str, ...]:
    paths = parse_paths(text)
    if not paths:
        raise argparse.ArgumentTypeError("expected a comma-separated list such as D,AD")
    return paths


def _filter_arg(text: str) -> str:
    if text not in FILTER_NAMES:
        raise argparse.ArgumentTypeError(f"unknown wavelet {text!r}; run 'filters' for the list")
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dwtembed", description="Wavelet compression and DWT-DCT sentence embeddings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def emb_args(p):
        p.add_argument("--emb", required=True, help="embedding file (GloVe/fastText text format)")
        p.add_argument("--lowercase", action="store_true", help="lowercase vocabulary and queries")
        p.add_argument("--max-vocab", type=int, default=None)

    def encoder_args(p):
        p.add_argument("--filter", type=_filter_arg, default=DEFAULT_FILTER)
        p.add_argument("--level", type=int, default=1, help="wavelet levels; 0 means DCT only")
        p.add_argument("--k", type=int, choices=(1, 2), default=1, help="DCT coefficients kept")
        p.add_argument("--oov", choices=("skip", "zero"), default="skip")

    sub.add_parser("filters", help="list supported wavelets and check their taps")

    p = sub.add_parser("dims", help="output dimension of a subband selection")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--paths", type=_paths_arg, required=True)

    p = sub.add_parser("compress", help="compress an embedding table")
    emb_args(p)
    p.add_argument("--filter", type=_filter_arg, default=DEFAULT_FILTER)
    p.add_argument("--paths", type=_paths_arg, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--precision", type=int, default=6)

    p = sub.add_parser("encode", help="encode a corpus, one sentence per line")
    emb_args(p)
    encoder_args(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--precision", type=int, default=6)

    p = sub.add_parser("eval-wordsim", help="Spearman word-similarity evaluation")
    emb_args(p)
    p.add_argument("--dataset", required=True)

    p = sub.add_parser("eval-cat", help="k-means concept categorization (purity)")
    emb_args(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("knn", help="nearest neighbours by cosine")
    emb_args(p)
    p.add_argument("--word", required=True)
    p.add_argument("--k", type=int, default=5)

    p = sub.add_parser("eval-sts", help="Pearson sentence-similarity evaluation")
    emb_args(p)
    encoder_args(p)
    p.add_argument("--pairs", required=True)
    p.add_argument("--avg", action="store_true", help="use the averaging baseline")

    return parser


def _load(args) -> EmbeddingTable:
    # malformed-line counts are logged by the loader
    table, _ = load_embeddings(args.emb, lowercase=args.lowercase, max_vocab=args.max_vocab)
    return table


def _encoder_config(args) -> SentenceEncoderConfig:
    if args.level < 0:
        raise UsageError("--level must be >= 0")
    return SentenceEncoderConfig(
        filter=args.filter,
        level=args.level,
        k=args.k,
        lowercase=args.lowercase,
        oov_policy=args.oov,
        empty_sentence_policy="zero",
    )


def _report(report) -> None:
    print(report.as_table())
    print(report.as_kv())


def cmd_filters(args) -> None:
    print(f"{'name':<7} {'taps':>4}  {'sum_h-sqrt2':>11}  {'sum_g':>9}  {'orth_err':>9}")
    for name in FILTER_NAMES:
        f = make_filter(name)
        n = f.len
        orth = max(
            abs(float(np.dot(f.h[: n - 2 * m], f.h[2 * m :])) - (1.0 if m == 0 else 0.0))
            for m in range(n // 2)
        )
        print(
            f"{name:<7} {n:>4}  {f.h.sum() - np.sqrt(2):>11.1e}  {f.g.sum():>9.1e}  {orth:>9.1e}"
        )


def cmd_dims(args) -> None:
    if args.dim < 1:
        raise UsageError("--dim must be >= 1")
    print(output_dim(CompressionSpec(paths=args.paths), args.dim))


def cmd_compress(args) -> None:
    spec = CompressionSpec(filter=args.filter, paths=args.paths)
    out = compress_table(_load(args), spec)
    save_embeddings(out, args.out, precision=args.precision)
    print(f"wrote {len(out)} vectors of dimension {out.dim} ({spec.filter}:{spec.label}) to {args.out}")


def cmd_encode(args) -> None:
    cfg = _encoder_config(args)
    table = _load(args)
    keys, rows = [], []
    n_oov = 0
    with open(args.corpus, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            tokens = line.split()
            n_oov += lookup_tokens(tokens, table, cfg.lowercase, cfg.oov_policy)[1]
            keys.append(str(lineno))
            rows.append(encode_tokens(tokens, table, cfg))
    dim = len(rows[0]) if rows else 0
    out = EmbeddingTable(tuple(keys), np.array(rows).reshape(len(rows), dim))
    save_embeddings(out, args.out, precision=args.precision)
    if n_oov:
        print(f"warning: {n_oov} OOV token(s) in {args.corpus}", file=sys.stderr)
    print(f"wrote {len(rows)} sentence vectors of dimension {dim} to {args.out}")


def cmd_eval_wordsim(args) -> None:
    _report(eval_word_similarity(_load(args), load_wordsim(args.dataset)))


def cmd_eval_cat(args) -> None:
    _report(eval_categorization(_load(args), load_categorization(args.dataset), seed=args.seed))


def cmd_knn(args) -> None:
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    for word, sim in knn(_load(args), args.word, args.k):
        print(f"{word}\t{sim:.6f}")


def cmd_eval_sts(args) -> None:
    cfg = _encoder_config(args)
    table = _load(args)
    _report(eval_sts(load_sts(args.pairs), table, cfg, average=args.avg, name=args.pairs))


COMMANDS = {
    "filters": cmd_filters,
    "dims": cmd_dims,
    "compress": cmd_compress,
    "encode": cmd_encode,
    "eval-wordsim": cmd_eval_wordsim,
    "eval-cat": cmd_eval_cat,
    "knn": cmd_knn,
    "eval-sts": cmd_eval_sts,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING, format="warning: %(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dwtembed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"dwtembed: error: {msg}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
