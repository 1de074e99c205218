"""Command line front end: fetch, summarize, analyze, export.

Exit codes: 0 success, 1 analysis error, 2 I/O or usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .centrality import centrality_table, eigenvector_centrality, spearman
from .community import LouvainConfig, community_sizes, louvain, read_partition, write_partition
from .countries import default_table, normalize_dataset_countries
from .coupling import CouplingOptions, build_coupling, coupling_report
from .formats import read_pajek, write_pajek, write_vosviewer
from .graph import largest_component
from .model import DIMENSIONS, ParseError, dataset_summary, read_dataset
from .netstats import StatisticError, full_report

logger = logging.getLogger("readnet")

EXIT_OK, EXIT_ANALYSIS, EXIT_IO = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_IO):
        super().__init__(message)
        self.code = code


# option name -> (type, default) for values that may come from --config
SETTINGS = {
    "summarize": {"input": (str, None), "format": (str, None), "normalize_countries": (bool, False)},
    "analyze": {
        "input": (str, None), "format": (str, None), "dimension": (str, None),
        "min_count": (int, 1), "loop_min_readers": (int, 2), "seed": (int, 0),
        "pajek_out": (str, None), "vos_map_out": (str, None), "vos_net_out": (str, None),
        "partition_out": (str, None), "report": (str, "text"),
        "normalize_countries": (bool, False), "unweighted_centrality": (bool, False),
        "top": (int, 10),
    },
    "export": {"graph": (str, None), "partition": (str, None), "format": (str, None),
               "pajek_out": (str, None), "vos_map_out": (str, None), "vos_net_out": (str, None)},
    "fetch": {
        "dois": (str, None), "base_url": (str, None), "cache_dir": (str, ".readnet-cache"),
        "token_env": (str, "READNET_API_TOKEN"), "rate": (float, 1.0), "retries": (int, 3),
        "backoff": (float, 1.0), "workers": (int, 4), "output": (str, None),
    },
}
REQUIRED = {"summarize": ["input"], "analyze": ["input", "dimension"],
            "export": ["graph", "format"], "fetch": ["dois", "base_url", "output"]}


def _bool(raw: str) -> bool:
    v = raw.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def load_config(path: str, command: str) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment. Unknown keys are rejected."""
    known = SETTINGS[command]
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep:
            raise CliError(f"{path}:{lineno}: expected key = value")
        if key not in known:
            raise CliError(f"{path}:{lineno}: unknown key {key!r} for {command}")
        typ = known[key][0]
        try:
            values[key] = _bool(raw) if typ is bool else typ(raw.strip())
        except ValueError as exc:
            raise CliError(f"{path}:{lineno}: {exc}") from None
    return values


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge defaults < config file < command line flags."""
    command = args.command
    file_values = load_config(args.config, command) if args.config else {}
    for key, (_, default) in SETTINGS[command].items():
        if getattr(args, key, None) is None:
            setattr(args, key, file_values.get(key, default))
    missing = [k for k in REQUIRED[command] if getattr(args, k) is None]
    if missing:
        raise CliError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return args


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _load(args):
    try:
        ds = read_dataset(args.input, args.format)
    except OSError as exc:
        raise CliError(f"cannot read {args.input}: {exc.strerror}") from None
    except ParseError as exc:
        raise CliError(f"{args.input}: {exc}") from None
    if args.normalize_countries:
        ds = normalize_dataset_countries(ds)
    return ds


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_summarize(args, out) -> int:
    ds = _load(args)
    stats = dataset_summary(ds, default_table())
    print(stats.render(), file=out)
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    if args.dimension not in DIMENSIONS:
        raise CliError(f"--dimension must be one of {', '.join(DIMENSIONS)}")
    if args.report not in ("text", "kv"):
        raise CliError("--report must be 'text' or 'kv'")
    ds = _load(args)
    try:
        opts = CouplingOptions(args.dimension, args.loop_min_readers, args.min_count)
        g = build_coupling(ds, opts)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_ANALYSIS) from None
    if g.n == 0:
        raise CliError(f"no categories of {args.dimension!r} pass the thresholds", EXIT_ANALYSIS)

    comp, dropped = largest_component(g)
    part = louvain(comp, LouvainConfig(seed=args.seed))
    try:
        report = full_report(comp, part, component=False)
    except StatisticError as exc:
        raise CliError(str(exc), EXIT_ANALYSIS) from None
    sizes = community_sizes(part)

    rho = cent = None
    if comp.m > comp.n_loops:
        cent = eigenvector_centrality(comp, weighted=not args.unweighted_centrality)
        if comp.n >= 3 and len(set(comp.sizes)) > 1:
            rho = spearman(cent.scores, comp.sizes)

    if args.report == "kv":
        print(report.render_kv(), file=out)
        print(f"Vertices before component extraction={g.n}", file=out)
        print(f"Dropped vertices={'|'.join(dropped)}", file=out)
        print(f"Number of communities={part.n_communities}", file=out)
        print(f"Community sizes={','.join(map(str, sizes))}", file=out)
        print(f"Spearman centrality vs size={'' if rho is None else repr(rho)}", file=out)
    else:
        print(coupling_report(g, args.top), file=out)
        print(f"\nlargest component: {comp.n} of {g.n} vertices", file=out)
        if dropped:
            print("not connected: " + ", ".join(dropped), file=out)
        print(f"\n{report.render_text()}\n", file=out)
        print(f"communities: {part.n_communities} (sizes {', '.join(map(str, sizes))})", file=out)
        if cent is not None:
            rows = centrality_table(comp, cent).splitlines()[: args.top]
            print("\neigenvector centrality (label, score, readers):", file=out)
            print("\n".join("  " + r for r in rows), file=out)
            if not cent.converged:
                print("  (power iteration did not converge)", file=out)
        if rho is not None:
            print(f"Spearman rank correlation, centrality vs readers: {rho:.3f}", file=out)

    if args.partition_out:
        _write(args.partition_out, write_partition(comp, part))
    if args.pajek_out:
        _write(args.pajek_out, write_pajek(comp))
    if args.vos_map_out or args.vos_net_out:
        vos = write_vosviewer(comp, part)
        if args.vos_map_out:
            _write(args.vos_map_out, vos.map_text())
        if args.vos_net_out:
            _write(args.vos_net_out, vos.network_text())
    return EXIT_OK


def cmd_export(args, out) -> int:
    try:
        g = read_pajek(_read_text(args.graph))
    except ValueError as exc:
        raise CliError(f"{args.graph}: {exc}") from None
    if args.format == "pajek":
        if not args.pajek_out:
            raise CliError("--pajek-out is required for --format pajek")
        _write(args.pajek_out, write_pajek(g))
    elif args.format == "vosviewer":
        if not (args.partition and args.vos_map_out and args.vos_net_out):
            raise CliError("--format vosviewer needs --partition, --vos-map-out and --vos-net-out")
        try:
            part = read_partition(_read_text(args.partition), g)
        except ValueError as exc:
            raise CliError(f"{args.partition}: {exc}", EXIT_ANALYSIS) from None
        vos = write_vosviewer(g, part)
        _write(args.vos_map_out, vos.map_text())
        _write(args.vos_net_out, vos.network_text())
    else:
        raise CliError("--format must be 'pajek' or 'vosviewer'")
    return EXIT_OK


def cmd_fetch(args, out) -> int:
    from .fetch import FetchConfig, fetch_batch
    from .model import serialize

    dois, types = [], []
    for line in _read_text(args.dois).splitlines():
        parts = line.strip().split()
        if not parts or parts[0].startswith("#"):
            continue
        dois.append(parts[0])
        types.append(parts[1] if len(parts) > 1 else "article")
    if not dois:
        raise CliError(f"{args.dois}: no DOIs")
    cfg = FetchConfig(base_url=args.base_url, cache_dir=Path(args.cache_dir),
                      auth_token_env=args.token_env, max_requests_per_second=args.rate,
                      max_retries=args.retries, backoff_base=args.backoff, max_workers=args.workers)
    result = fetch_batch(dois, cfg, types)
    try:
        Path(args.output).write_bytes(serialize(result.dataset))
    except OSError as exc:
        raise CliError(f"cannot write {args.output}: {exc.strerror}") from None
    print(result.summary.render(), file=out)
    for o in result.outcomes:
        if o.status == "failed":
            print(f"failed: {o.doi} ({o.reason})", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="readnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value settings file (flags take precedence)")

    p = sub.add_parser("summarize", help="record counts and coverage of an input file")
    common(p)
    p.add_argument("--input")
    p.add_argument("--format", choices=["json_lines", "csv"])
    p.add_argument("--normalize-countries", action="store_true", default=None)

    p = sub.add_parser("analyze", help="build a coupling network and print its statistics")
    common(p)
    p.add_argument("--input")
    p.add_argument("--format", choices=["json_lines", "csv"])
    p.add_argument("--dimension", choices=list(DIMENSIONS))
    p.add_argument("--min-count", type=int, help="readers for a category to be present (default 1)")
    p.add_argument("--loop-min-readers", type=int, help="readers for a self-loop event (default 2)")
    p.add_argument("--seed", type=int, help="Louvain visiting-order seed (default 0)")
    p.add_argument("--pajek-out")
    p.add_argument("--vos-map-out")
    p.add_argument("--vos-net-out")
    p.add_argument("--partition-out")
    p.add_argument("--report", choices=["text", "kv"])
    p.add_argument("--top", type=int, help="rows in the category listings (default 10)")
    p.add_argument("--normalize-countries", action="store_true", default=None)
    p.add_argument("--unweighted-centrality", action="store_true", default=None)

    p = sub.add_parser("export", help="convert a Pajek network (+ partition) to Pajek/VOSviewer files")
    common(p)
    p.add_argument("--graph", help="Pajek .net file")
    p.add_argument("--partition", help="label<TAB>community file")
    p.add_argument("--format", choices=["pajek", "vosviewer"])
    p.add_argument("--pajek-out")
    p.add_argument("--vos-map-out")
    p.add_argument("--vos-net-out")

    p = sub.add_parser("fetch", help="harvest readership statistics for a DOI list")
    common(p)
    p.add_argument("--dois", help="file with one DOI per line, optionally followed by article|review")
    p.add_argument("--base-url")
    p.add_argument("--cache-dir")
    p.add_argument("--token-env", help="environment variable holding the bearer token")
    p.add_argument("--rate", type=float, help="max requests per second")
    p.add_argument("--retries", type=int)
    p.add_argument("--backoff", type=float, help="base backoff in seconds")
    p.add_argument("--workers", type=int)
    p.add_argument("--output", help="JSON Lines dataset to write")
    return parser


COMMANDS = {"summarize": cmd_summarize, "analyze": cmd_analyze,
            "export": cmd_export, "fetch": cmd_fetch}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args = resolve(args)
        return COMMANDS[args.command](args, out)
    except CliError as exc:
        print(f"readnet: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
