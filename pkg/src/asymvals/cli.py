"""Command-line front end with deterministic JSON/CSV/SVG output."""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - py3.10
    import tomli as tomllib

from . import explorer, peretz, pinchuk
from .errors import AsymvalsError, ParseError
from .explorer import GridSpec, PairMap
from .peretz import AssertionList, AsymptoticIdentity
from .poly import Poly, parse

_JACOBIAN_SAMPLE_SEED = 20259
_JACOBIAN_SAMPLES = 10_000


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _grid_type(text: str) -> GridSpec:
    try:
        return GridSpec.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _target_type(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("target needs exactly u,v")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asymvals",
        description=(
            "Exact asymptotic values of bivariate polynomials and numeric "
            "exploration of polynomial pair maps."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_flags(sp, fixture_only=False):
        if not fixture_only:
            sp.add_argument("--poly", help="polynomial text")
            sp.add_argument("--file", help="path to a polynomial text file")
        sp.add_argument("--fixture", help="built-in fixture key")
        sp.add_argument("--config", help="optional TOML config file")

    sp = sub.add_parser("decompose", help="coefficients of powers of one variable")
    add_input_flags(sp)
    sp.add_argument("--var", choices=["x", "y"])

    sp = sub.add_parser("assert", help="truncation assertion list")
    add_input_flags(sp)
    sp.add_argument("--var", choices=["x", "y"])

    sp = sub.add_parser("balance", help="dominant balance of the active assertion")
    add_input_flags(sp)
    sp.add_argument("--var", choices=["x", "y"])

    sp = sub.add_parser("branches", help="asymptotic-curve branches for one mode")
    add_input_flags(sp)
    sp.add_argument("--mode", choices=["y-finite", "x-finite"])

    sp = sub.add_parser("identity", help="verify an asymptotic identity")
    add_input_flags(sp)

    sp = sub.add_parser("av", help="full asymptotic-value pipeline report")
    add_input_flags(sp)
    sp.add_argument("--mode", choices=["y-finite", "x-finite"])

    sp = sub.add_parser("fixtures", help="list or export built-in fixtures")
    add_input_flags(sp)
    sp.add_argument("--export", help="directory for canonical text export")

    sp = sub.add_parser("jacobian", help="exact Jacobian determinant of a pair")
    add_input_flags(sp)
    sp.add_argument("--q-file", help="path to the second component Q")

    sp = sub.add_parser("sample", help="image samples of a pair map over a grid")
    add_input_flags(sp)
    sp.add_argument("--q-file")
    sp.add_argument("--grid", type=_grid_type)
    sp.add_argument("--format", choices=["json", "csv"])

    sp = sub.add_parser("preimage", help="multistart Newton preimage count")
    add_input_flags(sp)
    sp.add_argument("--q-file")
    sp.add_argument("--grid", type=_grid_type, help="seed grid")
    sp.add_argument("--target", type=_target_type)
    sp.add_argument("--tol", type=float)

    sp = sub.add_parser("complement", help="raster scan for image-complement candidates")
    add_input_flags(sp)
    sp.add_argument("--q-file")
    sp.add_argument("--grid", type=_grid_type, help="domain grid")
    sp.add_argument("--window", type=_grid_type, help="image window grid")
    sp.add_argument("--rounds", type=int)

    sp = sub.add_parser("plot", help="SVG scatter (pair) or heatmap (single)")
    add_input_flags(sp)
    sp.add_argument("--q-file")
    sp.add_argument("--grid", type=_grid_type)
    sp.add_argument("--stroke", help="stroke color")

    return parser


def _load_config(args) -> dict:
    path = getattr(args, "config", None)
    if not path:
        return {}
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _setting(args, config, name, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config:
        return config[name]
    return default


def _input_poly(args, config) -> Poly:
    sources = [s for s in ("poly", "file", "fixture") if _setting(args, config, s)]
    if len(sources) > 1:
        raise AsymvalsError(f"exactly one input source allowed, got {sources}")
    if not sources:
        raise AsymvalsError("no input: use --poly, --file or --fixture")
    kind = sources[0]
    if kind == "poly":
        return parse(_setting(args, config, "poly"))
    if kind == "file":
        return parse(Path(_setting(args, config, "file")).read_text().strip())
    payload = pinchuk.load_builtin(_setting(args, config, "fixture")).payload
    if not isinstance(payload, Poly):
        raise AsymvalsError("fixture is not a plain polynomial")
    return payload


def _input_pair(args, config) -> PairMap:
    p = _input_poly(args, config)
    q_file = _setting(args, config, "q_file")
    if not q_file:
        raise AsymvalsError("pair commands need --q-file with the second component")
    q = parse(Path(q_file).read_text().strip())
    return PairMap(p, q)


def _grid(args, config, name="grid", default="-1,1,-1,1,32,32") -> GridSpec:
    value = _setting(args, config, name, default)
    if isinstance(value, GridSpec):
        return value
    return GridSpec.parse(value)


# -- subcommands -------------------------------------------------------------


def _cmd_decompose(args, config) -> str:
    p = _input_poly(args, config)
    var = _setting(args, config, "var", "x")
    return _dump(
        {
            "var": var,
            "coefficients": [
                {"exponent": str(e), "coefficient": str(c)}
                for e, c in p.decompose(var)
            ],
        }
    )


def _cmd_assert(args, config) -> str:
    p = _input_poly(args, config)
    var = _setting(args, config, "var", "x")
    alist = peretz.build_assertions(p, var)
    return _dump(
        {
            "decomposition_var": alist.decomposition_var,
            "coefficient_var": alist.coefficient_var,
            "assertions": [
                {"level": a.level, "body": str(a.body), "target": a.target}
                for a in alist
            ],
        }
    )


def _cmd_balance(args, config) -> str:
    p = _input_poly(args, config)
    var = _setting(args, config, "var", "x")
    alist = peretz.build_assertions(p, var)
    active = peretz.first_active_level(alist)
    result = peretz.dominant_balance(alist[active], alist.coefficient_var)
    out = {
        "level": active,
        "kind": result.kind,
        "power_product": None,
        "limit_poly": None,
        "roots": None,
    }
    if result.power_product:
        a_exp, b = result.power_product
        out["power_product"] = {
            "growth_exponent": str(a_exp),
            "vanishing_exponent": b,
        }
    if result.limit_poly is not None:
        out["limit_poly"] = str(result.limit_poly)
        if peretz.LIMIT_SYMBOL not in result.limit_poly.variables():
            report = peretz.real_roots(result.limit_poly, "r")
            out["roots"] = {
                "rational": [
                    {"root": str(r), "multiplicity": m}
                    for r, m in report.rational_roots
                ],
                "intervals": [
                    {"lower": str(lo), "upper": str(hi), "count": c}
                    for lo, hi, c in report.irrational_root_intervals
                ],
            }
    return _dump(out)


def _cmd_av(args, config) -> str:
    p = _input_poly(args, config)
    mode = _setting(args, config, "mode", "y-finite")
    return peretz.run_pipeline(p, mode).to_json()


def _cmd_branches(args, config) -> str:
    p = _input_poly(args, config)
    mode = _setting(args, config, "mode", "y-finite")
    report = peretz.run_pipeline(p, mode).to_dict()
    return _dump(
        {
            "branches": report["branches"],
            "rejections": report["rejections"],
            "mode": report["mode"],
        }
    )


def _cmd_identity(args, config) -> str:
    key = _setting(args, config, "fixture")
    if not key:
        raise AsymvalsError("identity needs --fixture with an identity key")
    payload = pinchuk.load_builtin(key).payload
    if not isinstance(payload, AsymptoticIdentity):
        raise AsymvalsError(f"fixture {key!r} is not an asymptotic identity")
    p_text = _setting(args, config, "poly")
    p = parse(p_text) if p_text else pinchuk.pinchuk_p()
    verified, rhs = peretz.verify_identity(p, payload)
    values = peretz.asymptotic_values(payload) if payload.rhs is not None else None
    return _dump(
        {
            "sign": payload.sign,
            "k": payload.k,
            "substitution": payload.substitution_text(),
            "rhs": str(rhs),
            "verified": verified,
            "values": str(values) if values is not None else None,
        }
    )


def _cmd_fixtures(args, config) -> str:
    key = _setting(args, config, "fixture")
    export = _setting(args, config, "export")
    if export:
        outdir = Path(export)
        outdir.mkdir(parents=True, exist_ok=True)
        written = []
        for name in pinchuk.list_builtins():
            fixture = pinchuk.load_builtin(name)
            path = outdir / f"{name}.txt"
            path.write_text(_fixture_text(fixture))
            written.append(str(path))
        return _dump({"exported": written})
    if key:
        fixture = pinchuk.load_builtin(key)
        return _dump(
            {
                "name": fixture.name,
                "provenance": fixture.provenance,
                "kind": type(fixture.payload).__name__,
                "text": _fixture_text(fixture),
            }
        )
    return _dump({"fixtures": pinchuk.list_builtins()})


def _fixture_text(fixture) -> str:
    payload = fixture.payload
    if isinstance(payload, Poly):
        return str(payload) + "\n"
    if isinstance(payload, AssertionList):
        lines = [
            f"level {a.level} -> {a.target}: {a.body}" for a in payload.assertions
        ]
        return "\n".join(lines) + "\n"
    if isinstance(payload, AsymptoticIdentity):
        subs = payload.substitution_text()
        lines = [
            f"sign: {payload.sign}",
            f"k: {payload.k}",
            f"{payload.growth_var} -> {subs[payload.growth_var]}",
            f"{payload.dep_var} -> {subs[payload.dep_var]}",
            f"rhs: {payload.rhs}",
        ]
        return "\n".join(lines) + "\n"
    raise AsymvalsError(f"cannot render fixture {fixture.name!r}")


def _cmd_jacobian(args, config) -> str:
    pair = _input_pair(args, config)
    det = explorer.jacobian_det(pair)
    xv, yv = pair.variables()
    rng = random.Random(_JACOBIAN_SAMPLE_SEED)
    positive = negative = zero = 0
    for _ in range(_JACOBIAN_SAMPLES):
        value = det.evaluate_float(
            {xv: rng.uniform(-10, 10), yv: rng.uniform(-10, 10)}
        )
        if value > 0:
            positive += 1
        elif value < 0:
            negative += 1
        else:
            zero += 1
    return _dump(
        {
            "det": str(det),
            "positivity": {
                "samples": _JACOBIAN_SAMPLES,
                "positive": positive,
                "negative": negative,
                "zero": zero,
            },
        }
    )


def _cmd_sample(args, config) -> str:
    pair = _input_pair(args, config)
    grid = _grid(args, config)
    rows = explorer.sample_image(pair, grid)
    fmt = _setting(args, config, "format", "json")
    if fmt == "csv":
        return explorer.rows_to_csv(rows)
    return _dump(
        {"rows": [[x, y, u, v, s] for x, y, u, v, s in rows]}
    )


def _cmd_preimage(args, config) -> str:
    pair = _input_pair(args, config)
    grid = _grid(args, config, default="-2,2,-2,2,9,9")
    target = _setting(args, config, "target")
    if target is None:
        raise AsymvalsError("preimage needs --target u,v")
    if isinstance(target, str):
        u, v = (float(part) for part in target.split(","))
        target = (u, v)
    tol = float(_setting(args, config, "tol", 1e-10))
    result = explorer.preimage_count(pair, tuple(target), grid, tol)
    return _dump(
        {
            "count": result.count,
            "points": [[x, y] for x, y in result.points],
            "singular_seeds": result.singular_seeds,
            "diverged_seeds": result.diverged_seeds,
        }
    )


def _cmd_complement(args, config) -> str:
    pair = _input_pair(args, config)
    domain = _grid(args, config)
    window = _grid(args, config, name="window", default="-1,1,-1,1,9,9")
    rounds = int(_setting(args, config, "rounds", 2))
    report = explorer.complement_scan(pair, domain, window, rounds)
    return _dump(report.to_dict())


def _cmd_plot(args, config) -> str:
    p = _input_poly(args, config)
    grid = _grid(args, config)
    stroke = _setting(args, config, "stroke", "black")
    q_file = _setting(args, config, "q_file")
    if q_file:
        pair = PairMap(p, parse(Path(q_file).read_text().strip()))
        rows = explorer.sample_image(pair, grid)
        return explorer.scatter_svg([(u, v) for _, _, u, v, _ in rows], stroke)
    names = sorted(p.variables())
    while len(names) < 2:
        names.append(f"_pad{len(names)}")
    values = [
        p.evaluate_float({names[0]: x, names[1]: y}) for x, y in grid.nodes()
    ]
    return explorer.heatmap_svg(grid, values, stroke)


_DISPATCH = {
    "decompose": _cmd_decompose,
    "assert": _cmd_assert,
    "balance": _cmd_balance,
    "branches": _cmd_branches,
    "identity": _cmd_identity,
    "av": _cmd_av,
    "fixtures": _cmd_fixtures,
    "jacobian": _cmd_jacobian,
    "sample": _cmd_sample,
    "preimage": _cmd_preimage,
    "complement": _cmd_complement,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args)
        output = _DISPATCH[args.command](args, config)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except AsymvalsError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    sys.stdout.write(output)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
