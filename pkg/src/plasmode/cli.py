"""Command-line interface.

Every subcommand reads an optional JSON config (``--config``), applies flag
overrides, validates the merged config against ``CONFIG_SCHEMA`` and only
then computes.  Exit codes: 0 success, 1 invalid input, 2 numerical
diagnostic (singular system, broken invariant, failed verification).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import jsonschema
import numpy as np

from .errors import NumericalDiagnostic, PlasmodeError, PoleError, ValidationError

__all__ = ["main", "run", "build_parser", "CONFIG_SCHEMA", "load_config"]

_COMPLEX = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}

_DRUDE = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "epsInf": {"type": "number", "exclusiveMinimum": 0},
        "omegaP": {"type": "number", "minimum": 0},
        "tau": {"type": "number", "exclusiveMinimum": 0},
        "eps0": {"type": "number", "exclusiveMinimum": 0},
    },
}


def _only(*present):
    styles = ("epsStar", "eps", "drude")
    absent = [k for k in styles if k not in present]
    schema: Dict[str, Any] = {"not": {"anyOf": [{"required": [k]} for k in absent]}}
    if present:
        schema["required"] = list(present)
    return schema


CONFIG_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "structure": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dimension": {"enum": [2, 3]},
                "generator": {"enum": ["explicit", "equidistant", "geometric", "extreme"]},
                "N": {"type": "integer", "minimum": 1},
                "radii": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                "r1": {"type": "number", "exclusiveMinimum": 0},
                "s": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "R": {"type": "number", "exclusiveMinimum": 0},
                "offsets": {"type": "array", "items": {"type": "number"}},
            },
        },
        "material": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "eps0": {"type": "number", "exclusiveMinimum": 0},
                "epsStar": {"type": "number", "exclusiveMinimum": 0},
                "delta": {"type": "number", "minimum": 0},
                "eps": {"type": "array", "items": _COMPLEX, "minItems": 1},
                "drude": _DRUDE,
            },
            # at most one material style: alternating, explicit list, or Drude
            "oneOf": [_only("epsStar"), _only("eps"), _only("drude"), _only()],
            "dependentSchemas": {"delta": {"required": ["epsStar"]}},
        },
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "method": {"enum": ["dp", "enumeration", "recursion-fit", "extreme-limit"]},
                "order": {"type": "integer", "minimum": 1},
                "qLow": {"type": "number"},
                "qHigh": {"type": "number"},
                "threshold": {"type": "number", "minimum": 0},
                "step": {"type": "number", "exclusiveMinimum": 0},
                "a0": {"type": "number"},
                "rMax": {"type": "number", "exclusiveMinimum": 0},
                "points": {"type": "integer", "minimum": 2},
                "omegaLow": {"type": "number", "exclusiveMinimum": 0},
                "omegaHigh": {"type": "number", "exclusiveMinimum": 0},
                "norm": {"enum": ["frobenius", "spectral"]},
                "nmax": {"type": "integer", "minimum": 2},
                "trials": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
            },
        },
    },
}


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1), not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# -- config handling -------------------------------------------------------------

def load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path!r}: {exc.strerror or exc}") from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path!r} is not valid JSON: {exc.msg} at line {exc.lineno}") from None
    validate_config(cfg)
    return cfg


def validate_config(cfg: dict):
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        if err.validator == "oneOf" and list(err.absolute_path) == ["material"]:
            msg = "specify at most one material style: epsStar (alternating), eps (explicit list) or drude"
        else:
            msg = err.message
        raise ValidationError(f"invalid config at {where}: {msg}")


def _parse_list(text: str, kind=float) -> list:
    try:
        return [kind(x.replace(" ", "")) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"cannot parse {text!r} as a comma-separated list") from None


def _complex_json(x):
    return [x.real, x.imag] if isinstance(x, complex) else x


def merge_flags(cfg: dict, args: argparse.Namespace) -> dict:
    """Flags override config values; a material-style flag replaces the file's style."""
    cfg = json.loads(json.dumps(cfg))
    st = cfg.setdefault("structure", {})
    mat = cfg.setdefault("material", {})
    opt = cfg.setdefault("options", {})
    g = lambda name: getattr(args, name, None)  # noqa: E731
    for flag, key in (("dim", "dimension"), ("generator", "generator"), ("layers", "N"),
                      ("r1", "r1"), ("scale", "s"), ("R", "R")):
        if g(flag) is not None:
            st[key] = g(flag)
    if g("radii") is not None:
        st["radii"] = _parse_list(g("radii"))
        if g("generator") is None:
            st["generator"] = "explicit"
    if g("offsets") is not None:
        st["offsets"] = _parse_list(g("offsets"))
    style_flags = {k: g(k) for k in ("eps_star", "eps") if g(k) is not None}
    if style_flags:
        for k in ("epsStar", "eps", "drude", "delta"):
            mat.pop(k, None)
    if g("eps_star") is not None:
        mat["epsStar"] = g("eps_star")
    if g("eps") is not None:
        mat["eps"] = [_complex_json(x) for x in _parse_list(g("eps"), complex)]
    if g("delta") is not None:
        mat["delta"] = g("delta")
    if g("eps0") is not None:
        mat["eps0"] = g("eps0")
    drude_flags = {"eps_inf": "epsInf", "omega_p": "omegaP", "tau": "tau", "drude_eps0": "eps0"}
    for flag, key in drude_flags.items():
        if g(flag) is not None:
            mat.setdefault("drude", {})[key] = g(flag)
    for flag, key in (("method", "method"), ("order", "order"), ("q_low", "qLow"), ("q_high", "qHigh"),
                      ("threshold", "threshold"), ("step", "step"), ("a0", "a0"), ("r_max", "rMax"),
                      ("points", "points"), ("omega_low", "omegaLow"), ("omega_high", "omegaHigh"),
                      ("norm", "norm"), ("nmax", "nmax"), ("trials", "trials"), ("seed", "seed")):
        if g(flag) is not None:
            opt[key] = g(flag)
    validate_config(cfg)
    return cfg


def _structure(cfg: dict, dimension: Optional[int] = None):
    from .structure import make_structure

    st = dict(cfg.get("structure", {}))
    if not st:
        raise ValidationError("no structure given: use --layers/--generator, --radii or a config 'structure' block")
    if "generator" not in st and "radii" not in st:
        st["generator"] = "equidistant"
    for key in ("N",):
        if st.get("generator") in ("equidistant", "geometric", "extreme") and key not in st:
            raise ValidationError(f"generator {st['generator']!r} needs {key} (--layers)")
    if st.get("generator") == "extreme" and "R" not in st:
        raise ValidationError("generator 'extreme' needs R (--R)")
    return make_structure(st, dimension)


def _eps0(cfg: dict) -> float:
    return float(cfg.get("material", {}).get("eps0", 1.0))


def _profile(cfg: dict, N: int):
    from .structure import MaterialProfile, alternating_profile

    mat = cfg.get("material", {})
    eps0 = _eps0(cfg)
    if "epsStar" in mat:
        return alternating_profile(mat["epsStar"], mat.get("delta", 0.0), eps0, N)
    if "eps" in mat:
        eps = [complex(*e) if isinstance(e, list) else complex(e) for e in mat["eps"]]
        if len(eps) != N:
            raise ValidationError(f"material lists {len(eps)} permittivities for {N} layers")
        return MaterialProfile(eps0, tuple(eps))
    raise ValidationError("this command needs a material: --eps-star [--delta] or --eps")


def _drude_params(cfg: dict):
    from .drude import DrudeParams

    d = cfg.get("material", {}).get("drude", {})
    base = DrudeParams()
    return DrudeParams(
        eps_inf=d.get("epsInf", base.eps_inf),
        omega_p=d.get("omegaP", base.omega_p),
        tau=d.get("tau", base.tau),
        eps0=d.get("eps0", base.eps0),
    )


# -- output ----------------------------------------------------------------------

def _num(x):
    """Shortest round-trip text for a number; non-finite values spelled out."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _json_num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def write_csv(path, header: Sequence[str], rows: List[Sequence]):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else _num(v) for v in row])
    _write_text(path, buf.getvalue())


def write_json(path, obj):
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")


def _write_text(path, text):
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, newline="")
    except OSError as exc:
        raise ValidationError(f"cannot write {path!r}: {exc.strerror or exc}") from None


def _figure(path, fn, *a, **kw):
    if path is None:
        return
    suffix = Path(path).suffix.lower()
    if suffix not in (".svg", ".png", ".pdf"):
        raise ValidationError(f"figure path {path!r} must end in .svg, .png or .pdf")
    try:
        fn(*a, path=path, **kw)
    except OSError as exc:
        raise ValidationError(f"cannot write {path!r}: {exc.strerror or exc}") from None


def _table(header, rows) -> str:
    cells = [[str(h) for h in header]] + [[c if isinstance(c, str) else f"{c:.6g}" for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


# -- subcommands -----------------------------------------------------------------

MODES_COLUMNS = ("index", "q", "lambda_plus", "lambda_minus", "eps_plus", "eps_minus", "residual")
SWEEP_COLUMNS = ("omega", "re_lambda", "im_lambda", "norm_m")


def _mode_rows(ms):
    rows = []
    if ms.has_zero_mode:
        rows.append((0, None, None, 0.0, None, ms.zero_mode_eps, 0.0))
    for i, m in enumerate(ms.modes, start=1):
        rows.append((i, m.q_star, m.lambda_plus, m.lambda_minus, m.eps_plus, m.eps_minus, m.residual))
    return rows


def cmd_modes(cfg, args):
    from .modes import solve_modes_3d
    from .plotting import plot_charpoly

    s = _structure(cfg, 3)
    method = cfg["options"].get("method", "dp")
    ms = solve_modes_3d(s, _eps0(cfg), method)
    rows = _mode_rows(ms)
    print(f"N = {s.N}, eps0 = {ms.eps0:g}, {len(ms.modes)} mode pair(s)"
          + (", zero mode lambda = 0" if ms.has_zero_mode else ""))
    print(_table(MODES_COLUMNS, [[("" if v is None else v) for v in r] for r in rows]))
    if args.csv:
        write_csv(args.csv, MODES_COLUMNS, rows)
    if args.json:
        write_json(args.json, {
            "N": s.N,
            "eps0": ms.eps0,
            "radii": list(s.radii),
            "zeroMode": {"lambda": 0.0, "eps": ms.zero_mode_eps} if ms.has_zero_mode else None,
            "modes": [
                {"q": m.q_star, "lambdaPlus": m.lambda_plus, "lambdaMinus": m.lambda_minus,
                 "epsPlus": _json_num(m.eps_plus), "epsMinus": _json_num(m.eps_minus),
                 "residual": m.residual, "multiplicity": m.multiplicity, "atPole": m.at_pole}
                for m in ms.modes
            ],
        })
    if ms.charpoly is not None and ms.charpoly.L >= 1:
        _figure(args.figure, plot_charpoly, ms.charpoly, -0.25, 2.0,
                roots=[m.q_star for m in ms.modes])
    return 0


def _charpoly_for(cfg):
    from .charpoly import charpoly_3d, extreme_coeffs

    method = cfg["options"].get("method", "dp")
    if method == "extreme-limit":
        N = cfg.get("structure", {}).get("N")
        if N is None:
            raise ValidationError("extreme-limit needs the layer count (--layers)")
        return extreme_coeffs(N)
    return charpoly_3d(_structure(cfg, 3), method)


def cmd_charpoly(cfg, args):
    from .plotting import plot_charpoly

    cp = _charpoly_for(cfg)
    header = ("k", "c_k", "c_k_tail", "q_power", "q_coefficient")
    tail = cp.tail if cp.tail is not None else np.zeros_like(cp.coeffs)
    rows = [(k, cp.coeffs[k], tail[k], cp.L - k, cp.q_coeffs[k]) for k in range(cp.L + 1)]
    print(f"N = {cp.N}, L = {cp.L}, method = {cp.method.value}")
    print(_table(header, rows))
    if args.csv:
        write_csv(args.csv, header, rows)
    if args.json:
        write_json(args.json, {"N": cp.N, "L": cp.L, "method": cp.method.value,
                               "c": [float(c) for c in cp.coeffs], "cTail": [float(c) for c in tail],
                               "qCoefficients": [float(c) for c in cp.q_coeffs]})
    if cp.L >= 1:
        _figure(args.figure, plot_charpoly, cp, -0.25, 2.0)
    return 0


def cmd_modes2d(cfg, args):
    from .modes import solve_modes_2d
    from .structure import epsilon_from_lambda

    s = _structure(cfg, 2)
    n = cfg["options"].get("order", 1)
    eps0 = _eps0(cfg)
    vals = solve_modes_2d(s, n)
    rows = []
    for i, v in enumerate(vals, start=1):
        try:
            e = epsilon_from_lambda(float(v), eps0, 2)
        except PoleError:
            e = -math.inf
        rows.append((i, float(v), e))
    header = ("index", "lambda_tilde", "eps")
    print(f"N = {s.N}, order n = {n}")
    print(_table(header, rows))
    if args.csv:
        write_csv(args.csv, header, rows)
    if args.json:
        write_json(args.json, {"N": s.N, "order": n, "lambdaTilde": [r[1] for r in rows],
                               "eps": [_json_num(r[2]) for r in rows]})
    return 0


def cmd_band(cfg, args):
    from .modes import band_scan
    from .plotting import plot_charpoly

    cp = _charpoly_for(cfg)
    opt = cfg["options"]
    if "qLow" not in opt or "qHigh" not in opt:
        raise ValidationError("band needs --q-low and --q-high")
    threshold = opt.get("threshold", 1e-4)
    bands = band_scan(cp, opt["qLow"], opt["qHigh"], threshold, opt.get("step", 1e-4))
    header = ("q_low", "q_high", "max_abs_f")
    rows = [(b.q_low, b.q_high, b.max_abs_f) for b in bands]
    print(f"N = {cp.N}: {len(bands)} band(s) with |f_N| <= {threshold:g} in [{opt['qLow']:g}, {opt['qHigh']:g}]")
    if rows:
        print(_table(header, rows))
    if args.csv:
        write_csv(args.csv, header, rows)
    if args.json:
        write_json(args.json, {"N": cp.N, "threshold": threshold,
                               "bands": [{"qLow": a, "qHigh": b, "maxAbsF": c} for a, b, c in rows]})
    _figure(args.figure, plot_charpoly, cp, opt["qLow"], opt["qHigh"], threshold=threshold)
    return 0


def cmd_field(cfg, args):
    from .field import eval_potential, field_coeffs, perturbation_amplitude, transmission_residual

    dim = cfg.get("structure", {}).get("dimension", 3)
    s = _structure(cfg, dim)
    prof = _profile(cfg, s.N)
    opt = cfg["options"]
    a0 = opt.get("a0", 1.0)
    n = opt.get("order", 1) if dim == 2 else None
    fc = field_coeffs(s, prof, a0, n)
    r_max = opt.get("rMax", 1.5 * s.radii[0])
    points = opt.get("points", 201)
    rs = np.linspace(0.0, r_max, points)
    rows = []
    for r in rs:
        pt = np.zeros(dim)
        pt[0] = r
        u = eval_potential(fc, s, pt)
        rows.append((float(r), u.real, u.imag))
    res = transmission_residual(fc, s, prof)
    amp = perturbation_amplitude(s, prof, n=n)
    print(f"N = {s.N}, dimension = {dim}: transmission residual {res:.3e}, amplitude b0/a0 = {amp.real:.12g}"
          + (f" {amp.imag:+.12g}i" if amp.imag else ""))
    header = ("r", "re_u", "im_u")
    if args.csv:
        write_csv(args.csv, header, rows)
    if args.json:
        write_json(args.json, {
            "N": s.N, "dimension": dim, "a0": a0, "residual": res, "amplitude": [amp.real, amp.imag],
            "a": [[z.real, z.imag] for z in fc.a], "b": [[z.real, z.imag] for z in fc.b],
            "ray": {"r": [r[0] for r in rows], "reU": [r[1] for r in rows], "imU": [r[2] for r in rows]},
        })
    if not args.csv and not args.json:
        print(_table(header, rows[:: max(1, len(rows) // 10)]))
    return 0


def cmd_sweep(cfg, args):
    from .drude import peak_match, sweep
    from .modes import solve_modes_3d
    from .plotting import plot_sweep

    s = _structure(cfg, 3)
    p = _drude_params(cfg)
    opt = cfg["options"]
    sr = sweep(s, p, opt.get("omegaLow", 2e14), opt.get("omegaHigh", 2e15), opt.get("points", 2000),
               opt.get("norm", "frobenius"))
    matches = peak_match(sr, solve_modes_3d(s))
    print(f"N = {s.N}: {len(sr.peaks)} peak(s) of |M| ({sr.norm})")
    if matches:
        print(_table(("omega", "re_lambda", "mode_lambda", "distance"),
                     [(m.omega, float(sr.lambdas[i].real), m.mode_lambda, m.distance)
                      for i, m in zip(sr.peaks, matches)]))
    rows = [(w, lam.real, lam.imag, v) for w, lam, v in zip(sr.omegas, sr.lambdas, sr.norm_m)]
    if args.csv:
        write_csv(args.csv, SWEEP_COLUMNS, rows)
    if args.json:
        write_json(args.json, {
            "N": s.N, "norm": sr.norm,
            "omega": sr.omegas.tolist(), "reLambda": sr.lambdas.real.tolist(),
            "imLambda": sr.lambdas.imag.tolist(), "normM": sr.norm_m.tolist(),
            "peaks": [{"omega": m.omega, "modeLambda": m.mode_lambda, "distance": m.distance} for m in matches],
        })
    _figure(args.figure, plot_sweep, sr)
    return 0


def cmd_verify(cfg, args):
    from .verify import run_all

    opt = cfg["options"]
    seed = opt.get("seed", 0)
    results = run_all(seed, opt.get("nmax", 12), opt.get("trials", 50))
    print(f"seed = {seed}")
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name}: {r.checks - len(r.failures)}/{r.checks} checks")
        for f in r.failures[:5]:
            print(f"      {f}")
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} suites passed")
    if args.json:
        write_json(args.json, {"seed": seed, "suites": [
            {"name": r.name, "checks": r.checks, "failures": r.failures} for r in results]})
    return 0 if failed == 0 else 2


def _table_cmd(name):
    def cmd(cfg, args):
        from .modes import solve_modes_3d
        from .reference import TABLES, TOLERANCE, ZERO_MODE
        from .structure import make_structure

        ref = TABLES[name]
        s = make_structure(ref["structure"], 3)
        ms = solve_modes_3d(s, 1.0)
        labels = ("q", "lambda_plus", "lambda_minus", "eps_plus", "eps_minus")
        rows = [("0", "lambda", ZERO_MODE[0], 0.0), ("0", "eps", ZERO_MODE[1], ms.zero_mode_eps)]
        for i, (m, refrow) in enumerate(zip(ms.modes, ref["rows"]), start=1):
            got = (m.q_star, m.lambda_plus, m.lambda_minus, m.eps_plus, m.eps_minus)
            rows += [(str(i), lab, r, g) for lab, r, g in zip(labels, refrow, got)]
        out = [(i, lab, r, g, abs(g - r), "ok" if abs(g - r) <= TOLERANCE else "DIFF") for i, lab, r, g in rows]
        header = ("mode", "quantity", "reference", "computed", "abs_diff", "status")
        print(_table(header, out))
        bad = sum(row[-1] != "ok" for row in out)
        print(f"{len(out) - bad}/{len(out)} entries within {TOLERANCE:g} of the 4-decimal reference")
        if args.csv:
            write_csv(args.csv, header, out)
        if args.json:
            write_json(args.json, {"table": name, "tolerance": TOLERANCE, "entries": [
                {"mode": int(i), "quantity": lab, "reference": r, "computed": g, "absDiff": d, "ok": st == "ok"}
                for i, lab, r, g, d, st in out]})
        return 2 if (bad and args.strict) else 0
    return cmd


COMMANDS = {
    "modes": (cmd_modes, "plasmon modes of the alternating 3D design"),
    "charpoly": (cmd_charpoly, "coefficients of the characteristic polynomial f_N(q)"),
    "modes2d": (cmd_modes2d, "2D mode values for a multipole order"),
    "band": (cmd_band, "intervals where |f_N| stays below a threshold"),
    "field": (cmd_field, "potential along the x1 ray and far-field amplitude"),
    "sweep": (cmd_sweep, "polarization-tensor norm over a Drude frequency sweep"),
    "verify": (cmd_verify, "randomized oracle and identity suites"),
    "table1": (_table_cmd("table1"), "regenerate the equidistant N=19 mode table and diff it"),
    "table2": (_table_cmd("table2"), "regenerate the geometric N=19 mode table and diff it"),
}


def _add_structure(p, dim=False):
    g = p.add_argument_group("structure")
    if dim:
        g.add_argument("--dim", type=int, choices=(2, 3), help="dimension (default 3)")
    g.add_argument("--generator", choices=("explicit", "equidistant", "geometric", "extreme"))
    g.add_argument("--layers", type=int, metavar="N", help="layer count")
    g.add_argument("--radii", metavar="R1,R2,...", help="explicit radii, outermost first")
    g.add_argument("--r1", type=float, help="outer radius (geometric)")
    g.add_argument("--scale", type=float, help="shrink factor s in (0, 1) (geometric)")
    g.add_argument("--R", type=float, help="base radius (extreme)")
    g.add_argument("--offsets", metavar="C1,C2,...", help="decreasing offsets (extreme)")


def _add_material(p, drude=False):
    g = p.add_argument_group("material")
    if not drude:
        g.add_argument("--eps0", type=float, help="background permittivity (default 1)")
        g.add_argument("--eps-star", type=float, help="alternating design: metal layers -eps_star + i delta")
        g.add_argument("--delta", type=float, help="loss of the metal layers (default 0)")
        g.add_argument("--eps", help="explicit permittivities, comma-separated, complex as 1+2j")
    else:
        g.add_argument("--eps-inf", type=float, help="Drude eps' (default 9e-12)")
        g.add_argument("--omega-p", type=float, help="plasma frequency (default 2e15)")
        g.add_argument("--tau", type=float, help="damping (default 1e14)")
        g.add_argument("--drude-eps0", type=float, help="host permittivity (default 1.33**2 eps')")


def _add_output(p, figure=True):
    g = p.add_argument_group("output")
    g.add_argument("--csv", metavar="PATH", help="write CSV ('-' for stdout)")
    g.add_argument("--json", metavar="PATH", help="write JSON ('-' for stdout)")
    if figure:
        g.add_argument("--figure", "--svg", dest="figure", metavar="PATH", help="write a figure (.svg/.png/.pdf)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plasmode", description="Plasmon modes of concentric layered structures.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--config", metavar="PATH", help="JSON config; flags override its values")
        if name in ("modes", "charpoly", "modes2d", "band", "field", "sweep"):
            _add_structure(p, dim=name == "field")
        if name in ("modes", "modes2d", "field"):
            _add_material(p)
        if name == "sweep":
            _add_material(p, drude=True)
        if name in ("modes", "charpoly", "band"):
            p.add_argument("--method", choices=("dp", "enumeration", "recursion-fit", "extreme-limit"),
                           help="coefficient route (default dp)")
        if name in ("modes2d", "field"):
            p.add_argument("--order", type=int, help="2D multipole order n (default 1)")
        if name == "band":
            p.add_argument("--q-low", type=float)
            p.add_argument("--q-high", type=float)
            p.add_argument("--threshold", type=float, help="|f| bound (default 1e-4)")
            p.add_argument("--step", type=float, help="grid step (default 1e-4)")
        if name == "field":
            p.add_argument("--a0", type=float, help="background amplitude (default 1)")
            p.add_argument("--r-max", type=float, help="end of the radial ray (default 1.5 r_1)")
            p.add_argument("--points", type=int, help="ray samples (default 201)")
        if name == "sweep":
            p.add_argument("--omega-low", type=float, help="default 2e14")
            p.add_argument("--omega-high", type=float, help="default 2e15")
            p.add_argument("--points", type=int, help="log-spaced samples (default 2000)")
            p.add_argument("--norm", choices=("frobenius", "spectral"))
        if name == "verify":
            p.add_argument("--nmax", type=int, help="largest N (default 12)")
            p.add_argument("--trials", type=int, help="random geometries per N (default 50)")
            p.add_argument("--seed", type=int, help="generator seed (default 0)")
        if name in ("table1", "table2"):
            p.add_argument("--strict", action="store_true", help="exit 2 if any entry differs")
        _add_output(p, figure=name not in ("verify", "table1", "table2", "modes2d"))
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fn, _ = COMMANDS[args.command]
    try:
        cfg = merge_flags(load_config(args.config), args)
        return fn(cfg, args)
    except ValidationError as exc:
        print(f"plasmode: error: {exc}", file=sys.stderr)
        return 1
    except NumericalDiagnostic as exc:
        print(f"plasmode: numerical diagnostic: {exc}", file=sys.stderr)
        return 2
    except PlasmodeError as exc:  # pragma: no cover - every subclass is handled above
        print(f"plasmode: error: {exc}", file=sys.stderr)
        return 1


def main(argv: Optional[Sequence[str]] = None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
