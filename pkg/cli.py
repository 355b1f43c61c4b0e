"""Command-line entry point.

Exit codes: 0 success, 1 a check or certificate failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

import bounds
import certifiers
import constructions
from artifacts import ArtifactStore
from code_model import SubsystemCode, distance, parameters
from config import configure_logging
from correctability import Region, is_correctable, is_dressed_cleanable
from geometry import Box, Embedding, extract_interactions, find_tiling, subdivide, subdivision_count_bound

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


# ---------------------------------------------------------------------------
# Contours
# ---------------------------------------------------------------------------

def contour_exponents(kappa, delta, D: int, code_class: str = bounds.SUBSYSTEM) -> Tuple[Fraction, Fraction]:
    """Exact (log_n ℓ*, log_n M*) at k = n^κ, d = n^δ."""
    kappa, delta = Fraction(kappa), Fraction(delta)
    outer = Fraction(D - 1, D)
    distance_branch = delta - outer
    if code_class == bounds.SUBSYSTEM:
        dimension_branch = outer * (kappa + delta / (D - 1) - 1)
    elif code_class == bounds.PROJECTOR:
        dimension_branch = Fraction(D - 1, 2 * D) * (kappa + 2 * delta / (D - 1) - 1)
    else:
        raise ValueError(f"unknown code class {code_class!r}")
    return max(distance_branch, dimension_branch, Fraction(0)), max(kappa, delta, Fraction(0))


@dataclass
class ContourTable:
    D: int
    code_class: str
    grid_step: float
    grid: List[Dict[str, float]] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {"D": self.D, "code_class": self.code_class, "grid_step": self.grid_step, "grid": self.grid}

    @classmethod
    def from_dict(cls, payload: Dict) -> "ContourTable":
        return cls(int(payload["D"]), payload["code_class"], float(payload["grid_step"]), list(payload["grid"]))

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.DictWriter(out, fieldnames=["kappa", "delta", "log_ell_star", "log_M_star"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.grid)
        return out.getvalue()


def emit_contours(D: int, code_class: str = bounds.SUBSYSTEM, grid_step: float = 0.1) -> ContourTable:
    if D < 2:
        raise ValueError(f"D must be at least 2, got {D}")
    if not 0 < grid_step <= 0.5:
        error_msg = f"grid step must lie in (0, 0.5], got {grid_step}"
        logger.error(error_msg)
        raise ValueError(error_msg)
    step = Fraction(str(grid_step))
    ticks = [i * step for i in range(int(1 / step) + 1)]
    table = ContourTable(D, code_class, grid_step)
    for kappa in ticks:
        for delta in ticks:
            ell, count = contour_exponents(kappa, delta, D, code_class)
            table.grid.append({
                "kappa": float(kappa),
                "delta": float(delta),
                "log_ell_star": float(ell),
                "log_M_star": float(count),
            })
    return table


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------

def _read_json(path: str):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _load_code(args) -> Tuple[SubsystemCode, Optional[Embedding]]:
    """Code file, either bare or an embedded code document; ``--embedding`` overrides."""
    payload = _read_json(args.code)
    embedding = None
    if isinstance(payload, dict) and "code" in payload:
        code = SubsystemCode.from_dict(payload["code"])
        if "embedding" in payload:
            embedding = Embedding.from_dict(payload["embedding"])
    else:
        code = SubsystemCode.from_dict(payload)
    if getattr(args, "embedding", None):
        embedding = Embedding.from_dict(_read_json(args.embedding))
    return code, embedding


def _require_embedding(embedding: Optional[Embedding]) -> Embedding:
    if embedding is None:
        raise ValueError("this command needs an embedding (--embedding or an embedded code file)")
    return embedding


def _points(payload, dimension: int) -> np.ndarray:
    points = payload.get("points", []) if isinstance(payload, dict) else payload
    return Embedding(dimension, points).coordinates


def _mode(args) -> str:
    return certifiers.VERIFIED if args.verified else certifiers.STRICT


def _certificate_exit(cert: certifiers.Certificate, args) -> int:
    _save(args, "certificate", cert.kind, cert.to_dict())
    if args.trace:
        print(cert.trace())
    else:
        sys.stdout.write(cert.to_json_lines())
    return EXIT_OK if cert.outcome != certifiers.Outcome.STUCK else EXIT_FAILED


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_params(args) -> int:
    code, _ = _load_code(args)
    _emit(parameters(code).to_dict())
    return EXIT_OK


def cmd_distance(args) -> int:
    code, _ = _load_code(args)
    _emit(distance(code, args.weight_cap).to_dict())
    return EXIT_OK


def cmd_interactions(args) -> int:
    code, embedding = _load_code(args)
    interactions = extract_interactions(code, _require_embedding(embedding))
    payload = interactions.to_dict()
    payload["max_length"] = interactions.max_length
    if args.ell is not None:
        count, f = interactions.count_long(args.ell)
        payload.update({"ell": args.ell, "long_interactions": count, "f": f.tolist()})
    _emit(payload)
    return EXIT_OK


def cmd_bounds(args) -> int:
    report = bounds.bounds_for(args.code_class, args.n, args.k, args.d, args.D, args.mode)
    _emit(report.to_dict())
    return EXIT_OK


def cmd_regime(args) -> int:
    _emit(bounds.regime_check(args.n, args.k, args.d, args.D, args.family).to_dict())
    return EXIT_OK


def cmd_check_region(args) -> int:
    code, embedding = _load_code(args)
    region = Region.from_dict(_read_json(args.region), embedding)
    if args.cleanable:
        result = {"dressed_cleanable": is_dressed_cleanable(code, region)}
    else:
        result = {"correctable": is_correctable(code, region)}
    payload = {**region.to_dict(), **result}
    _save(args, "region", "region", payload)
    _emit(payload)
    return EXIT_OK


def cmd_tile(args) -> int:
    x_points = _points(_read_json(args.x), args.D) if args.x else np.zeros((0, args.D))
    y_points = _points(_read_json(args.y), args.D) if args.y else np.zeros((0, args.D))
    report = find_tiling(x_points, y_points, args.width, args.ell, args.D, rng=np.random.default_rng(args.seed))
    _emit(report.to_dict())
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_subdivide(args) -> int:
    box = Box.from_dict(_read_json(args.box))
    masses = _read_json(args.masses)
    positions = _points(masses, box.dimension)
    weights = masses.get("weights") if isinstance(masses, dict) else None
    pieces = subdivide(box, positions, weights, args.ell, args.d1, args.axis)
    total = float(np.sum(weights)) if weights is not None else float(len(positions))
    bound = subdivision_count_bound(total, args.d1)
    _emit({"boxes": [p.to_dict() for p in pieces], "count": len(pieces), "count_bound": bound})
    return EXIT_OK if len(pieces) <= bound else EXIT_FAILED


def cmd_sweep(args) -> int:
    code, embedding = _load_code(args)
    embedding = _require_embedding(embedding)
    cert = certifiers.expansion_sweep(code, embedding, None, args.ell, args.tau, args.d, _mode(args))
    return _certificate_exit(cert, args)


def cmd_holographic(args) -> int:
    code, embedding = _load_code(args)
    box = Box.from_dict(_read_json(args.box))
    cert = certifiers.holographic_certify(code, _require_embedding(embedding), box, args.ell, _mode(args), args.d)
    return _certificate_exit(cert, args)


def cmd_partition(args) -> int:
    code, embedding = _load_code(args)
    result = certifiers.theorem_partition_builder(
        code, _require_embedding(embedding), args.ell, args.variant, _mode(args),
        d=args.d, width=args.width, seed=args.seed,
    )
    _save(args, "partition", args.variant, result.to_dict())
    _emit(result.to_dict())
    failed = result.certificate.outcome == certifiers.Outcome.STUCK or (result.report and not result.report.holds)
    return EXIT_FAILED if failed else EXIT_OK


def _family(args) -> constructions.EmbeddedCode:
    if args.family == "bacon_shor":
        return constructions.bacon_shor(args.size)
    if args.family == "surface":
        return constructions.surface_code(args.size)
    return constructions.small_inner_codes(args.family, args.D, args.size)


def _store(args, name: str, ec: constructions.EmbeddedCode) -> None:
    if args.out:
        store = ArtifactStore(args.out)
        store.save("code", name, ec.code.to_dict())
        store.save("embedding", name, ec.embedding.to_dict())


def _save(args, kind: str, default_name: str, payload: Dict) -> None:
    if getattr(args, "out", None):
        ArtifactStore(args.out).save(kind, args.name or default_name, payload)


def cmd_construct(args) -> int:
    ec = _family(args)
    _store(args, args.name or ec.family, ec)
    _emit(ec.to_dict())
    return EXIT_OK


def cmd_concat(args) -> int:
    inner = constructions.EmbeddedCode.from_dict(_read_json(args.inner))
    outer = constructions.EmbeddedCode.from_dict(_read_json(args.outer))
    if args.ell_target is None:
        code = constructions.concatenate(inner.code, outer.code)
        _emit({"code": code.to_dict(), "params": parameters(code).to_dict()})
        return EXIT_OK
    plan = constructions.ConcatPlan(inner, outer, args.ell_target, args.ell2)
    ec = constructions.build_concat_embedding(plan)
    _store(args, args.name or "concatenated", ec)
    _emit(ec.to_dict())
    return EXIT_OK


def cmd_saturation(args) -> int:
    ec = constructions.EmbeddedCode.from_dict(_read_json(args.code))
    report = constructions.saturation_report(ec, args.code_class, args.weight_cap)
    _save(args, "report", "saturation", report)
    _emit(report)
    return EXIT_OK


def cmd_contours(args) -> int:
    table = emit_contours(args.D, args.code_class, args.grid_step)
    _save(args, "contours", f"{args.code_class}-D{args.D}", table.to_dict())
    if args.csv:
        sys.stdout.write(table.to_csv())
    else:
        _emit(table.to_dict())
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_code(p, embedding=True) -> None:
    p.add_argument("code", help="code JSON file (bare code or embedded code document)")
    if embedding:
        p.add_argument("--embedding", help="embedding JSON file")


def _add_parameters(p) -> None:
    p.add_argument("-n", type=float, required=True, help="number of physical qubits")
    p.add_argument("-k", type=float, required=True, help="number of logical qubits")
    p.add_argument("-d", type=float, required=True, help="distance")
    p.add_argument("-D", type=int, required=True, help="embedding dimension")


def _add_output(p) -> None:
    p.add_argument("--out", help="artifact directory")
    p.add_argument("--name", help="artifact name")


def _add_certifier(p) -> None:
    _add_code(p)
    _add_output(p)
    p.add_argument("--ell", type=float, required=True, help="interaction length threshold")
    p.add_argument("-d", type=float, help="distance (computed from the code when omitted)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--strict", action="store_true", help="decide steps by the counting argument (default)")
    group.add_argument("--verified", action="store_true", help="decide steps by the exact correctability test")
    p.add_argument("--trace", action="store_true", help="print a readable trace instead of JSON lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="locality", description="Locality analysis of subsystem and stabilizer codes")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR (default from LOCALITY_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="n, k, g and s of a code")
    _add_code(p, embedding=False)
    p.set_defaults(handler=cmd_params)

    p = sub.add_parser("distance", help="exact dressed distance by region enumeration")
    _add_code(p, embedding=False)
    p.add_argument("--weight-cap", type=int, help="stop searching above this weight")
    p.set_defaults(handler=cmd_distance)

    p = sub.add_parser("interactions", help="interaction pairs and lengths under an embedding")
    _add_code(p)
    p.add_argument("--ell", type=float, help="also count interactions of length >= ell")
    p.set_defaults(handler=cmd_interactions)

    p = sub.add_parser("bounds", help="lower bounds M* and ell*")
    _add_parameters(p)
    p.add_argument("--class", dest="code_class", choices=[bounds.SUBSYSTEM, bounds.PROJECTOR], default=bounds.SUBSYSTEM)
    p.add_argument("--mode", choices=[bounds.ASYMPTOTIC, bounds.EXPLICIT], default=bounds.ASYMPTOTIC)
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("regime", help="whether parameters fit the local regime")
    _add_parameters(p)
    p.add_argument("--family", choices=["bravyi", "bpt"], default="bravyi")
    p.set_defaults(handler=cmd_regime)

    p = sub.add_parser("check-region", help="correctability of a region")
    _add_code(p)
    p.add_argument("--region", required=True, help="region JSON file ({'qubits': [...]} or {'boxes': [...]})")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--correctable", action="store_true", help="test correctability (default)")
    group.add_argument("--cleanable", action="store_true", help="test dressed cleanability")
    _add_output(p)
    p.set_defaults(handler=cmd_check_region)

    p = sub.add_parser("tile", help="grid offset with few points near faces")
    p.add_argument("--x", help="points JSON file scored against codimension-2 faces")
    p.add_argument("--y", help="points JSON file scored against codimension-1 faces")
    p.add_argument("--width", type=float, required=True)
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("-D", type=int, required=True)
    p.add_argument("--seed", type=int, required=True, help="seed for the random offset search")
    p.set_defaults(handler=cmd_tile)

    p = sub.add_parser("subdivide", help="cut a box into slabs of bounded mass")
    p.add_argument("--box", required=True, help="box JSON file ({'min': [...], 'max': [...]})")
    p.add_argument("--masses", required=True, help="JSON file with 'points' and optional 'weights'")
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--d1", type=float, required=True)
    p.add_argument("--axis", type=int, default=0)
    p.set_defaults(handler=cmd_subdivide)

    p = sub.add_parser("sweep", help="expansion sweep over the whole layout")
    _add_certifier(p)
    p.add_argument("--tau", type=float, help="slab threshold (default ell * n^((D-1)/D))")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("holographic", help="certify a box by growing cubes")
    _add_certifier(p)
    p.add_argument("--box", required=True, help="box JSON file")
    p.set_defaults(handler=cmd_holographic)

    p = sub.add_parser("partition", help="build the A/B(/C) partition of a counting argument")
    _add_code(p)
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--variant", choices=certifiers.VARIANTS, default=certifiers.THM3_2)
    p.add_argument("-d", type=float, help="distance (computed from the code when omitted)")
    p.add_argument("--width", type=float, help="cube width (default w0, at least 5*ell)")
    p.add_argument("--seed", type=int, required=True, help="seed for the tiling search")
    p.add_argument("--verified", action="store_true", help="check the dimension bound on the partition")
    _add_output(p)
    p.set_defaults(handler=cmd_partition)

    p = sub.add_parser("construct", help="emit a built-in code with its embedding")
    p.add_argument("--family", required=True, choices=["bacon_shor", "surface", *constructions.INNER_CODES])
    p.add_argument("--size", type=int, help="lattice size m, or repetition length")
    p.add_argument("-D", type=int, default=2, help="lattice dimension for the small codes")
    _add_output(p)
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("concat", help="concatenate two embedded codes")
    p.add_argument("--inner", required=True, help="embedded inner code JSON file")
    p.add_argument("--outer", required=True, help="embedded outer code JSON file")
    p.add_argument("--ell-target", type=float, help="target length; builds the dilated embedding")
    p.add_argument("--ell2", type=float, help="outer locality (default: measured)")
    _add_output(p)
    p.set_defaults(handler=cmd_concat)

    p = sub.add_parser("saturation", help="measured longest interaction versus ell*")
    p.add_argument("code", help="embedded code JSON file")
    p.add_argument("--class", dest="code_class", choices=[bounds.SUBSYSTEM, bounds.PROJECTOR], default=bounds.SUBSYSTEM)
    p.add_argument("--weight-cap", type=int)
    _add_output(p)
    p.set_defaults(handler=cmd_saturation)

    p = sub.add_parser("contours", help="exponent-space table of log_n ell* and log_n M*")
    p.add_argument("-D", "--D", dest="D", type=int, default=2)
    p.add_argument("--class", dest="code_class", choices=[bounds.SUBSYSTEM, bounds.PROJECTOR], default=bounds.SUBSYSTEM)
    p.add_argument("--grid-step", type=float, default=0.1)
    p.add_argument("--csv", action="store_true", help="CSV instead of JSON")
    _add_output(p)
    p.set_defaults(handler=cmd_contours)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        configure_logging(args.log_level)
        return args.handler(args)
    except (ValueError, json.JSONDecodeError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
