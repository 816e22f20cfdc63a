"""Batch experiment driver: reproducible CSV (and SVG) artifacts from one config.

Every CSV starts with comment lines recording the exact configuration and a
hash of it, so identical invocations produce byte-identical files.  Exit code
is nonzero when any certified inequality fails.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bases, figs, kakeya
from .covering import (
    EstimateViolation,
    austin_cover,
    check_dilation_bound,
    check_geometric_estimate,
    check_translation_bound,
    dilate_interval,
)
from .dyadic import build_tree, load_tree
from .slabs import Slab, interval_union_length, realize_node, union_measure

Q = Fraction


_NON_CONFIG_KEYS = ("func", "out")  # output location is not experiment configuration


def _config_hash(args: argparse.Namespace) -> str:
    blob = json.dumps({k: str(v) for k, v in sorted(vars(args).items())
                       if k not in _NON_CONFIG_KEYS}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _write_csv(path: Path, args, header: list, rows: list) -> None:
    lines = [f"# config_hash={_config_hash(args)}"]
    for k, v in sorted(vars(args).items()):
        if k not in _NON_CONFIG_KEYS:
            lines.append(f"# {k}={v}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path}")


def _parse_depths(text: str) -> list:
    if ":" in text:
        a, b = text.split(":")
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",")]


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _basis_spec(args) -> bases.BasisSpec:
    if not args.basis:
        raise SystemExit("this command needs --basis KIND (or --tree FILE where supported)")
    omega: object = ()
    if args.basis in ("directional", "rarefied"):
        omega = bases.CANTOR if args.omega == "cantor" else tuple(
            Fraction(tok) for tok in args.omega.split(",") if tok)
    return bases.BasisSpec(
        kind=args.basis,
        depth_cap=args.depth_cap,
        count_cap=args.count_cap,
        a=args.a,
        b=args.b,
        omega=omega,
    )


def _add_basis_flags(p: argparse.ArgumentParser, with_depth_cap=True) -> None:
    p.add_argument("--basis", choices=["strong", "power", "sine", "directional", "rarefied"],
                   help="generated family to use")
    p.add_argument("--a", type=int, default=1, help="power-basis exponent a")
    p.add_argument("--b", type=int, default=1, help="power-basis exponent b")
    p.add_argument("--omega", default="cantor",
                   help="directional ratios: comma list of fractions, or 'cantor'")
    p.add_argument("--count-cap", type=int, default=4096)
    if with_depth_cap:
        p.add_argument("--depth-cap", type=int, default=8)


# ---------------------------------- split ----------------------------------

def cmd_split(args) -> int:
    rows = []
    spec = _basis_spec(args)
    profile = bases.split_growth_profile(spec, _parse_depths(args.depths))
    for depth, lam, sat in profile:
        witness_height = ""
        if lam > 0:
            family = bases.generate_basis(
                bases.BasisSpec(spec.kind, depth, spec.count_cap, spec.a, spec.b, spec.omega))
            tree = build_tree(family)
            witness_height = figs.extract_fig_tree(tree, lam).height
        rows.append((args.basis, depth, lam, sat, witness_height))
    _write_csv(Path(args.out) / "split.csv", args,
               ["family", "depth", "lambda", "saturated", "witness_height"], rows)
    return 0


# ---------------------------------- kakeya ---------------------------------

def _load_or_generate_tree(args):
    if args.tree:
        return load_tree(Path(args.tree).read_text())
    if not args.basis:
        raise SystemExit("kakeya needs --tree FILE or --basis KIND")
    family = bases.generate_basis(_basis_spec(args))
    if not family:
        raise SystemExit("generated family is empty; raise the caps")
    return build_tree(family)


def cmd_kakeya(args) -> int:
    tree = _load_or_generate_tree(args)
    lam, _ = figs.analytic_split(tree)
    scale = args.fig_scale if args.fig_scale is not None else lam
    if scale < 1 or scale > lam:
        raise SystemExit(f"requested fig scale {scale} infeasible: analytic split is {lam}")
    fig = figs.extract_fig_tree(tree, scale)

    stats = kakeya.ratio_statistics(fig, args.trials, args.seed)
    ratio_rows = [(i, f"{r:.12g}") for i, r in enumerate(stats.ratios)]
    _write_csv(Path(args.out) / "ratios.csv", args, ["trial", "a2_over_a1"], ratio_rows)

    sample = kakeya.sample_random_set(fig, args.seed)
    a1 = union_measure(sample.A1_slabs)
    a2 = union_measure(sample.A2_slabs)
    cert_b = kakeya.certify_bateman(sample, samples_per_slab=args.grid)

    # deepened generators of the same family when available, else lower halves
    if args.basis:
        deep = bases.generate_basis(_basis_spec_deep(args))
        assignment = bases.leaf_assignment(deep, sample.leaf_choices)
    else:
        assignment = bases.bottom_half_assignment(sample.leaf_choices)
    assembly = kakeya.assemble_B2(sample, assignment)
    cert17 = kakeya.certify_assembled(sample, assembly, samples_per_slab=max(3, args.grid // 2))
    b2_area = union_measure(assembly.slabs)

    rows = []
    for cert, label in ((cert_b, "quarter"), (cert17, "sixteenth")):
        if cert is None:
            continue
        for p in args.p:
            eps, bound = kakeya.kakeya_level_and_bound(cert.A1_area, cert.superlevel_area,
                                                       cert.eta, p)
            rows.append((label, fig.scale, fig.height, a1, a2, b2_area, cert.eta, eps,
                         f"{cert.verified_fraction:.6f}", p, f"{bound:.12g}"))
    _write_csv(Path(args.out) / "certificate.csv", args,
               ["level", "n", "h", "A1", "A2", "B2", "eta", "epsilon",
                "verified_fraction", "p", "norm_lower_bound"], rows)
    return 0


def _basis_spec_deep(args) -> bases.BasisSpec:
    spec = _basis_spec(args)
    deep_count = max(spec.count_cap, 100_000) if spec.kind == "sine" else spec.count_cap
    return bases.BasisSpec(spec.kind, max(spec.depth_cap + 16, 24), deep_count,
                           spec.a, spec.b, spec.omega)


# ---------------------------------- lemmas ---------------------------------

def _random_intervals(rng, count):
    out = []
    for _ in range(count):
        lo = Q(rng.randint(-64, 64), 16)
        out.append((lo, lo + Q(rng.randint(1, 64), 16)))
    return out


def cmd_lemmas(args) -> int:
    import random

    rng = random.Random(args.seed)
    rows = []
    try:
        for i in range(args.instances):
            fam = _random_intervals(rng, rng.randint(1, 12))
            sel = austin_cover(fam)
            tripled = [dilate_interval(fam[j], 3) for j in sel]
            covered = interval_union_length(tripled)
            rows.append(("austin", i, len(fam), len(sel), covered))
            tau = Q(rng.randint(1, 32), 8)
            rep = check_dilation_bound(fam, tau)
            rows.append(("dilation", i, tau, rep.union_len, rep.dilated_len))
            mu = Q(rng.randint(1, 16), 4)
            shifts = [Q(rng.randint(-999, 999), 1000) * mu * (hi - lo) for lo, hi in fam]
            rep = check_translation_bound(fam, shifts, mu)
            rows.append(("translation", i, mu, rep.achieved_ratio, rep.required_ratio))
    except EstimateViolation as exc:
        print(f"VIOLATION: {exc}", file=sys.stderr)
        return 1
    _write_csv(Path(args.out) / "lemmas.csv", args,
               ["suite", "instance", "parameter", "value_a", "value_b"], rows)
    return 0


# ---------------------------------- claim ----------------------------------

def cmd_claim(args) -> int:
    table = bases.sine_claim_check(args.H, args.nmax)
    rows = []
    missing = 0
    for k in sorted(table):
        n = table[k]
        if n is None:
            missing += 1
            rows.append((k, "", "", ""))
        else:
            import math

            rows.append((k, n, f"{math.sin(n):.12g}", (n - 1).bit_length()))
    _write_csv(Path(args.out) / "claim.csv", args,
               ["cell", "witness_n", "sin_n", "scale"], rows)
    return 1 if missing else 0


# ---------------------------------- render ---------------------------------

def _svg_of_slabs(groups, path: Path) -> None:
    """Minimal SVG writer: each group of slabs becomes translucent polygons."""
    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    all_slabs = [s for g in groups for s in g]
    xs = [float(c[0]) for s in all_slabs for c in s.corners()]
    ys = [float(c[1]) for s in all_slabs for c in s.corners()]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span_x, span_y = max(x1 - x0, 1e-9), max(y1 - y0, 1e-9)
    W, H = 900, 600

    def pt(x, y):
        return f"{(float(x) - x0) / span_x * W:.2f},{H - (float(y) - y0) / span_y * H:.2f}"

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">']
    for gi, group in enumerate(groups):
        color = palette[gi % len(palette)]
        for s in group:
            pts = " ".join(pt(*c) for c in s.corners())
            parts.append(f'<polygon points="{pts}" fill="{color}" fill-opacity="0.35" '
                         f'stroke="{color}" stroke-width="0.4"/>')
    parts.append("</svg>")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(parts) + "\n")
    print(f"wrote {path}")


def cmd_render(args) -> int:
    tree = _load_or_generate_tree(args)
    lam, _ = figs.analytic_split(tree)
    scale = args.fig_scale if args.fig_scale is not None else lam
    if scale < 1:
        raise SystemExit("nothing to draw: analytic split is 0")
    fig = figs.extract_fig_tree(tree, scale)
    sample = kakeya.sample_random_set(fig, args.seed)
    groups = [sample.A1_slabs, sample.A2_slabs]
    _svg_of_slabs(groups, Path(args.out) / "sample.svg")
    return 0


# ----------------------------------- main ----------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maxgeom",
                                 description="analytic splits and Kakeya-type set experiments")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="analytic-split growth profile of a family")
    _add_basis_flags(p, with_depth_cap=False)
    p.add_argument("--depths", default="1:8", help="range a:b or comma list")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_split, depth_cap=0, tree=None)

    p = sub.add_parser("kakeya", help="sample random tube sets and certify levels")
    _add_basis_flags(p)
    p.add_argument("--tree", help="tree file in 'root n k' + node-lines format")
    p.add_argument("--fig-scale", type=int, default=None)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eta", type=_parse_fraction, default=Q(1, 4))
    p.add_argument("--p", type=float, nargs="+", default=[1.5, 2.0, 4.0])
    p.add_argument("--grid", type=int, default=6)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_kakeya)

    p = sub.add_parser("lemmas", help="randomized covering-estimate sweeps")
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("claim", help="orientation-cell witness search for the sine family")
    p.add_argument("--H", type=int, default=4)
    p.add_argument("--nmax", type=int, default=100_000)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_claim)

    p = sub.add_parser("render", help="SVG picture of one random sample")
    _add_basis_flags(p)
    p.add_argument("--tree")
    p.add_argument("--fig-scale", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
