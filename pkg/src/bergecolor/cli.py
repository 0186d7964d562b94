"""Command-line surface: construct, verify, stats, and partition subcommands.

Construction artifacts (coloring and partition files) are byte-identical
across runs with the same parameters; manifests and verification reports
additionally record wall time, so they are excluded from that guarantee.
All files are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from pathlib import Path

from . import __version__
from .bipartite import (
    BipartitePartition,
    bipartite_has_biclique,
    c4free_partition,
    load_partition,
    save_partition,
    verify_girth,
    verify_partition,
)
from .builder import BuildConfig, build, compact
from .detect import (
    BicliquePattern,
    CyclePattern,
    ForbiddenFamily,
    verify_coloring_free,
)
from .enlarge import CoverBaseColorer, EnlargementSpec
from .errors import (
    BergecolorError,
    CertificationRequiredError,
    HypothesisViolatedError,
)
from .model import load_coloring, save_coloring, validate_coloring


def _atomic_write_json(path: Path, payload: dict) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_file(path: Path, writer) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".tmp-", suffix=path.suffix)
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def family_beta(family: ForbiddenFamily, r: int) -> float:
    """Color-count exponent the pipeline targets for this family."""
    values = []
    for p in family.patterns:
        if isinstance(p, CyclePattern):
            m = max(p.length // 2, 1)
            values.append(r - 1 - 1 / m)
        else:
            values.append(r - 2 + 1 / p.b)
    return max(values)


def certify_partition_for_family(
    p: BipartitePartition, family: ForbiddenFamily
) -> list[str]:
    """Per-class ingredient checks; returns problem strings (empty = certified)."""
    problems: list[str] = []
    need_girth = family.required_girth()
    for i, g in enumerate(p.classes):
        if need_girth:
            ok, cycle = verify_girth(g, need_girth)
            if not ok:
                problems.append(
                    f"class {i}: cycle of length {len(cycle)} < girth {need_girth}"
                )
        for pat in family.patterns:
            if isinstance(pat, BicliquePattern):
                hit = bipartite_has_biclique(g, pat.a, pat.b)
                if hit is not None:
                    problems.append(
                        f"class {i}: contains complete {pat.a}x{pat.b} bipartite subgraph"
                    )
    return problems


def _resolve_family(args) -> ForbiddenFamily:
    if args.family:
        return ForbiddenFamily.parse(args.family)
    if args.m:
        return ForbiddenFamily.cycles(args.m)
    raise HypothesisViolatedError("need --m or --family to fix the forbidden family")


def cmd_construct(args) -> int:
    t0 = time.perf_counter()
    family = _resolve_family(args)
    r = args.r
    if (args.q is None) == (args.partition is None):
        raise HypothesisViolatedError("exactly one of --q or --partition is required")

    s = args.s if args.s is not None else (r + 1) // 2
    t = args.t if args.t is not None else r // 2
    if s + t != r:
        raise HypothesisViolatedError(f"side copies {s}+{t} must sum to r={r}")
    bound = family.max_side_copies()
    if (s >= bound or t >= bound) and not args.allow_large_r:
        raise HypothesisViolatedError(
            f"side copies s={s}, t={t} must stay below {bound} for family "
            f"{family} (r < {2 * bound - 1}); pass --allow-large-r to override"
        )

    if args.q is not None:
        partition = c4free_partition(args.q)
        partition_src = f"native:q={args.q}"
        need = family.required_girth()
        if need > 6:
            raise CertificationRequiredError(
                f"native classes have girth 6, family needs girth {need}; "
                "import a partition instead"
            )
        problems = []
        if any(isinstance(p, BicliquePattern) for p in family.patterns):
            problems = certify_partition_for_family(partition, family)
    else:
        partition = load_partition(args.partition)
        partition_src = str(args.partition)
        problems = certify_partition_for_family(partition, family)
    if problems:
        raise CertificationRequiredError("; ".join(problems))

    side = partition.n_a
    n = args.n if args.n is not None else r * side
    if n > r * side:
        raise HypothesisViolatedError(
            f"n={n} exceeds r*side={r * side}; the base tiling is too small"
        )
    beta = family_beta(family, r)
    spec = EnlargementSpec(s=s, t=t)
    base = CoverBaseColorer(partition, spec)
    cfg = BuildConfig(r=r, n=n, beta=beta, base=base)
    result = build(cfg)
    coloring = result.coloring
    raw_colors = result.num_colors
    compact_stage = None
    if args.compact:
        coloring = compact(coloring)
        compact_stage = {"colors_before": raw_colors, "colors_after": coloring.num_colors}

    report_summary = None
    certified = True
    if args.certify:
        report = verify_coloring_free(coloring, family)
        certified = report.passed
        report_summary = {
            "passed": report.passed,
            "n_classes": report.n_classes,
            "n_checked": report.n_checked,
            "failures": len(report.failures),
        }

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    coloring_path = out_dir / "coloring.json"
    manifest_path = out_dir / "manifest.json"
    _atomic_file(coloring_path, lambda tmp: save_coloring(tmp, coloring))

    validation = validate_coloring(coloring)
    manifest = {
        "command": "construct",
        "version": __version__,
        "parameters": {
            "r": r,
            "m": args.m,
            "q": args.q,
            "partition": None if args.q is not None else str(args.partition),
            "n": n,
            "s": s,
            "t": t,
            "family": str(family),
            "compact": bool(args.compact),
            "certify": bool(args.certify),
        },
        "n": n,
        "r": r,
        "beta": beta,
        "num_colors": coloring.num_colors,
        "outputs": {"coloring": str(coloring_path), "manifest": str(manifest_path)},
        "stages": {
            "partition": {
                "source": partition_src,
                "classes": partition.num_classes,
                "side": side,
                "certified": True,
            },
            "cover": {"full_colors": partition.num_classes * side ** (r - 2)},
            "build": result.manifest_stages(),
            "compact": compact_stage,
            "certify": report_summary,
        },
        "validation": validation.to_dict(),
        "wall_time_ms": round((time.perf_counter() - t0) * 1000, 1),
    }
    _atomic_write_json(manifest_path, manifest)
    print(
        f"construct: n={n} r={r} colors={coloring.num_colors} "
        f"family={family} -> {coloring_path}"
    )
    if not validation.ok:
        print("validation failed:", "; ".join(validation.violations), file=sys.stderr)
        return 1
    return 0 if certified else 1


def cmd_verify(args) -> int:
    try:
        coloring = load_coloring(args.coloring)
    except (OSError, ValueError, KeyError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    family = ForbiddenFamily.parse(args.family)
    report = verify_coloring_free(coloring, family)
    payload = report.to_dict()
    payload["command"] = "verify"
    payload["coloring"] = str(args.coloring)
    if args.report:
        _atomic_write_json(Path(args.report), payload)
    status = "pass" if report.passed else "FAIL"
    print(
        f"verify: {status} family={family} classes={report.n_classes} "
        f"checked={report.n_checked} witnesses={len(report.failures)}"
    )
    for failure in report.failures[:5]:
        print(
            f"  witness in color {failure.color}: core={failure.witness.core}",
            file=sys.stderr,
        )
    return 0 if report.passed else 1


def _manifest_for(path: Path) -> dict | None:
    candidates = [
        path.parent / "manifest.json",
        path.with_suffix(".manifest.json"),
    ]
    for cand in candidates:
        if cand.exists():
            try:
                with open(cand, "r", encoding="utf-8") as fh:
                    doc = json.load(fh)
                if doc.get("command") == "construct":
                    return doc
            except (OSError, ValueError):
                continue
    return None


def cmd_stats(args) -> int:
    rows = []
    for name in args.colorings:
        path = Path(name)
        coloring = load_coloring(path)
        sizes = coloring.class_sizes()
        manifest = _manifest_for(path)
        beta = manifest.get("beta") if manifest else None
        if beta is None:
            print(f"warning: no manifest next to {path}; ratio blank", file=sys.stderr)
        colors = coloring.num_colors
        ratio = (
            f"{colors / coloring.host.n ** beta:.4f}" if beta is not None else ""
        )
        rows.append(
            (
                str(path),
                coloring.host.n,
                coloring.host.r,
                colors,
                int(sizes.max()) if len(sizes) else 0,
                f"{beta:.3f}" if beta is not None else "",
                ratio,
            )
        )
    header = ("file", "n", "r", "colors", "max_class", "beta", "colors/n^beta")
    widths = [
        max(len(str(row[i])) for row in rows + [header]) for i in range(len(header))
    ]
    for row in [header] + rows:
        print("  ".join(str(v).ljust(w) for v, w in zip(row, widths)).rstrip())
    return 0


def cmd_partition(args) -> int:
    t0 = time.perf_counter()
    girth = args.girth
    if (args.q is None) == (getattr(args, "import_path", None) is None):
        raise HypothesisViolatedError("exactly one of --q or --import is required")
    if args.q is not None:
        partition = c4free_partition(args.q)
        source = f"native:q={args.q}"
    else:
        partition = load_partition(args.import_path)
        source = str(args.import_path)
    class_status = []
    all_ok = True
    for i, g in enumerate(partition.classes):
        ok, cycle = verify_girth(g, girth)
        class_status.append(
            {
                "class": i,
                "edges": g.edge_count,
                "girth_ok": ok,
                "shortest_cycle": list(cycle) if cycle else None,
            }
        )
        all_ok &= ok
    if args.q is not None and not all_ok:
        # native output is never emitted uncertified
        raise CertificationRequiredError(
            f"native construction does not reach girth {girth}"
        )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    _atomic_file(out, lambda tmp: save_partition(tmp, partition))
    coverage = verify_partition(partition)
    report = {
        "command": "partition",
        "source": source,
        "girth_target": girth,
        "certified": all_ok,
        "coverage_ok": coverage.ok,
        "classes": class_status,
        "output": str(out),
        "wall_time_ms": round((time.perf_counter() - t0) * 1000, 1),
    }
    report_path = Path(args.report) if args.report else out.with_suffix(".report.json")
    _atomic_write_json(report_path, report)
    status = "certified" if all_ok else "UNCERTIFIED"
    print(
        f"partition: {status} classes={partition.num_classes} "
        f"girth>={girth} -> {out}"
    )
    return 0 if all_ok else 1


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bergecolor",
        description=(
            "Color complete uniform hypergraphs so no color class contains a "
            "Berge cycle or biclique, and verify such colorings exactly."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a certified coloring of K_n^(r)")
    c.add_argument("--r", type=int, required=True, help="uniformity")
    c.add_argument("--m", type=int, help="forbid Berge cycles of length 2m and 2m+1")
    c.add_argument("--q", type=int, help="prime for the native bipartite tiling")
    c.add_argument("--partition", type=Path, help="imported partition file")
    c.add_argument("--family", help="explicit family, e.g. cycle:4,cycle:5")
    c.add_argument("--n", type=int, help="vertex count (default r * side)")
    c.add_argument("--s", type=int, help="left-side copies (default ceil(r/2))")
    c.add_argument("--t", type=int, help="right-side copies (default floor(r/2))")
    c.add_argument("--compact", action="store_true", help="merge disjoint classes")
    c.add_argument("--certify", action="store_true", help="run the freeness sweep")
    c.add_argument("--allow-large-r", action="store_true")
    c.add_argument("--out", type=Path, required=True, help="output directory")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a coloring file against a family")
    v.add_argument("coloring", type=Path)
    v.add_argument("--family", required=True)
    v.add_argument("--report", type=Path)
    v.set_defaults(func=cmd_verify)

    st = sub.add_parser("stats", help="tabulate coloring files")
    st.add_argument("colorings", nargs="+")
    st.set_defaults(func=cmd_stats)

    p = sub.add_parser("partition", help="emit a certified bipartite tiling")
    p.add_argument("--q", type=int, help="prime for the native construction")
    p.add_argument("--import", dest="import_path", type=Path, help="partition file")
    p.add_argument("--girth", type=int, default=6)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--report", type=Path)
    p.set_defaults(func=cmd_partition)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BergecolorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
