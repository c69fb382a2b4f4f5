"""Scenario loading, the full computation pipeline and report emission."""

from __future__ import annotations

import copy
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (EXACT, NUMERIC, InvertiblePair, NCTorus, NotDiagonallyDominant,
                      ToleranceNotMet, format_element, inverse_residual, l1_norm,
                      monomial_inverse, neumann_inverse, NotAMonomial, ModeMismatch)
from .calculus import qhm_calculus, torus_calculus
from .connection import (Connection, NonScalarCoefficient, christoffel_closed_form,
                         compat_residual, conformal_lc_connection, flat_connection,
                         qhm_lc_connection, qhm_nabla0, residual_report, torsion,
                         tt_from_nabla0)
from .curvature import (closed_form_curvature, curvature_operator, matrix_difference_norm,
                        ricci, scalar_curvature, torus_conformal_reference, torus_printed_scalar)
from .metric import MetricSpec, nondegeneracy_residual
from .scalars import GaussianRational, format_rational, parse_rational, phase_value

DEFAULT_TOLERANCE_MULT = 10.0
EPS = sys.float_info.epsilon
PATHS = ("definitional", "closed_form", "reference")

COMMUTATION = "U V = phi V U with phi = exp(2 pi i theta); (U^m V^n)(U^m' V^n') = phi^(-n m') U^(m+m') V^(n+n')"


class SchemaError(ValueError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class UnknownPreset(ValueError):
    pass


PRESETS = {
    "nc-torus": {
        "calculus": "torus", "theta": "1/4", "mode": EXACT,
        "metric": {"type": "diagonal"}, "base_connection": "flat",
        "outputs": list(PATHS),
        "description": "noncommutative 2-torus, flat base connection",
    },
    "commutative-torus": {
        "calculus": "torus", "theta": "0", "mode": EXACT,
        "metric": {"type": "diagonal"}, "base_connection": "flat",
        "outputs": list(PATHS),
        "description": "2-torus at theta = 0",
    },
    "qhm": {
        "calculus": "qhm", "theta": "0", "mode": EXACT,
        "metric": {"type": "diagonal"}, "base_connection": "qhm-nabla0",
        "outputs": ["definitional"],
        "description": "quantum Heisenberg manifold, rank-3 calculus with scalar structure constants",
    },
}

_KEYS = {"name", "preset", "calculus", "theta", "mode", "metric", "base_connection",
         "probes", "tolerance", "outputs"}


@dataclass
class Scenario:
    name: str
    preset: str | None
    calculus: str
    theta: object
    mode: str
    metric: dict
    base_connection: object
    probes: list | None
    tolerance: float | None
    outputs: list
    raw: dict = field(default_factory=dict)

    def to_json(self):
        return copy.deepcopy(self.raw)


def load_scenario(source) -> Scenario:
    """Accept a path, a JSON string or an already parsed dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError("$", "scenario must be a JSON object")
    unknown = set(data) - _KEYS
    if unknown:
        raise SchemaError(f"$.{sorted(unknown)[0]}", "unknown field")

    resolved = {}
    preset = data.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise UnknownPreset(f"unknown preset {preset!r}; known: {', '.join(sorted(PRESETS))}")
        resolved.update({k: copy.deepcopy(v) for k, v in PRESETS[preset].items() if k != "description"})
        resolved["preset"] = preset
    resolved.update(copy.deepcopy({k: v for k, v in data.items() if k != "preset"}))
    resolved.setdefault("theta", "0")
    resolved.setdefault("mode", EXACT)
    resolved.setdefault("metric", {"type": "diagonal"})
    resolved.setdefault("outputs", list(PATHS))
    resolved.setdefault("name", preset or "scenario")

    calc = resolved.get("calculus")
    if calc not in ("torus", "qhm"):
        raise SchemaError("$.calculus", "must be 'torus' or 'qhm' (or set a preset)")
    resolved.setdefault("base_connection", "flat" if calc == "torus" else "qhm-nabla0")

    theta = resolved["theta"]
    if isinstance(theta, bool) or not isinstance(theta, (str, int, float)):
        raise SchemaError("$.theta", "must be a rational string or a number")
    try:
        theta = parse_rational(theta) if isinstance(theta, (str, int)) else float(theta)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError("$.theta", str(exc)) from exc
    if isinstance(theta, float) and theta != theta:
        raise SchemaError("$.theta", "NaN")

    mode = resolved["mode"]
    if mode not in (EXACT, NUMERIC):
        raise SchemaError("$.mode", "must be 'exact' or 'numeric'")

    metric = resolved["metric"]
    if not isinstance(metric, dict) or metric.get("type") not in ("diagonal", "conformal"):
        raise SchemaError("$.metric.type", "must be 'diagonal' or 'conformal'")
    if metric["type"] == "conformal" and "k" not in metric:
        raise SchemaError("$.metric.k", "required for a conformal metric")

    base = resolved["base_connection"]
    if isinstance(base, str):
        if base not in ("flat", "qhm-nabla0"):
            raise SchemaError("$.base_connection", "must be 'flat', 'qhm-nabla0' or {'christoffel': ...}")
    elif not (isinstance(base, dict) and isinstance(base.get("christoffel"), list)):
        raise SchemaError("$.base_connection", "explicit connections need a 'christoffel' table")

    outputs = resolved["outputs"]
    if not isinstance(outputs, list) or any(o not in PATHS for o in outputs):
        raise SchemaError("$.outputs", f"entries must be among {list(PATHS)}")
    if "definitional" not in outputs:
        outputs = ["definitional"] + outputs
        resolved["outputs"] = outputs

    tol = resolved.get("tolerance")
    if tol is not None and (isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol <= 0):
        raise SchemaError("$.tolerance", "must be a positive number (residual multiplier)")

    probes = resolved.get("probes")
    if probes is not None and not isinstance(probes, list):
        raise SchemaError("$.probes", "must be a list of {i, j, a}")

    return Scenario(name=str(resolved["name"]), preset=preset, calculus=calc, theta=theta,
                    mode=mode, metric=metric, base_connection=base, probes=probes,
                    tolerance=None if tol is None else float(tol), outputs=list(outputs),
                    raw=resolved)


def _element(alg, obj, path):
    if not isinstance(obj, dict) or not isinstance(obj.get("terms", []), list):
        raise SchemaError(path, "expected {'mode': ..., 'terms': [...]}")
    try:
        return alg.from_json(obj)
    except ModeMismatch as exc:
        raise SchemaError(f"{path}.mode", str(exc)) from exc
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"malformed element: {exc}") from exc


def _build_pair(alg, metric) -> InvertiblePair:
    k = _element(alg, metric["k"], "$.metric.k")
    spec = metric.get("k_inv")
    if spec is None:
        if len(k.terms) == 1 or (not alg.exact and len(k.support()) == 1):
            spec = "monomial"
        elif not alg.exact:
            spec = {"neumann": {"order": 12, "tolerance": 1e-10}}
        else:
            raise SchemaError("$.metric.k_inv", "required for non-monomial exact k")
    try:
        if spec == "monomial":
            return monomial_inverse(k)
        if isinstance(spec, dict) and "neumann" in spec:
            opts = spec["neumann"]
            return neumann_inverse(k, int(opts.get("order", 12)), float(opts.get("tolerance", 1e-10)))
    except NotAMonomial as exc:
        raise SchemaError("$.metric.k_inv", f"k is not a monomial ({exc})") from exc
    except (NotDiagonallyDominant, ToleranceNotMet, ModeMismatch) as exc:
        raise SchemaError("$.metric.k_inv", str(exc)) from exc
    if isinstance(spec, dict):
        k_inv = _element(alg, spec, "$.metric.k_inv")
        res = inverse_residual(k, k_inv)
        if alg.exact and res != 0:
            raise SchemaError("$.metric.k_inv", "k_inv is not an exact inverse of k")
        return InvertiblePair(k, k_inv, res, res)
    raise SchemaError("$.metric.k_inv", "must be an element, 'monomial' or {'neumann': ...}")


def _build_base(desc, base):
    if base == "flat":
        return flat_connection(desc)
    if base == "qhm-nabla0":
        if desc.n != 3:
            raise SchemaError("$.base_connection", "qhm-nabla0 needs the qhm calculus")
        return qhm_nabla0(desc)
    try:
        return Connection.from_nested(desc, base["christoffel"])
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError("$.base_connection.christoffel", str(exc)) from exc


def _build_probes(desc, probes):
    if probes is None:
        return None
    out = []
    for idx, p in enumerate(probes):
        path = f"$.probes[{idx}]"
        try:
            i, j = int(p["i"]) - 1, int(p["j"]) - 1
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(path, "needs integer i and j") from exc
        if not (0 <= i < desc.n and 0 <= j < desc.n):
            raise SchemaError(path, f"indices must lie in 1..{desc.n}")
        a = _element(desc.algebra, p["a"], f"{path}.a") if "a" in p else desc.algebra.one()
        out.append((i, j, a))
    return out


def tolerance_multiplier(scenario: Scenario) -> float:
    if scenario.tolerance is not None:
        return scenario.tolerance
    env = os.environ.get("NCG_TOLERANCE_MULT")
    if env:
        try:
            val = float(env)
        except ValueError as exc:
            raise SchemaError("NCG_TOLERANCE_MULT", f"not a number: {env!r}") from exc
        if val > 0:
            return val
        raise SchemaError("NCG_TOLERANCE_MULT", "must be positive")
    return DEFAULT_TOLERANCE_MULT


def numeric_tolerance(pair: InvertiblePair, desc, mult: float) -> float:
    """mult * eps * S + r * S with S = (1 + |k|)(1 + |k^-1|)(1 + max_j |d_j k|)^2."""
    dk = max(l1_norm(desc.derivative(j, pair.k)) for j in range(desc.n))
    scale = (1 + l1_norm(pair.k)) * (1 + l1_norm(pair.k_inv)) * (1 + dk) ** 2
    return mult * EPS * scale + float(pair.residual_bound) * scale


def _choose_qhm_sign(alg, base_spec):
    """Try d(e_3) = +e_1^e_2 and -e_1^e_2; keep the one making the base torsionless."""
    results = {}
    for sign in (1, -1):
        desc = qhm_calculus(alg, sign)
        base = _build_base(desc, base_spec)
        results[sign] = (desc, base, sum(t.norm() for t in torsion(base)))
    for sign in (1, -1):
        if results[sign][2] == 0:
            return sign, results
    return 1, results


def _num_json(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    return float(x)


def evaluate_element(a, theta) -> list:
    """Evaluate phi at theta; coefficients merged per (m, n), exact when possible."""
    merged = {}
    for key, c in a.terms.items():
        m, n = key[0], key[1]
        if a.algebra.exact:
            p = phase_value(theta, key[2])
            val = c * p if isinstance(p, GaussianRational) else complex(c) * p
        else:
            val = c
        prev = merged.get((m, n))
        if prev is None:
            merged[(m, n)] = val
        elif isinstance(prev, GaussianRational) and isinstance(val, GaussianRational):
            merged[(m, n)] = prev + val
        else:
            merged[(m, n)] = complex(prev) + complex(val)
    out = []
    for (m, n) in sorted(merged):
        v = merged[(m, n)]
        if isinstance(v, GaussianRational):
            if v.is_zero():
                continue
            coeff = {"re": format_rational(v.re), "im": format_rational(v.im)}
        else:
            if v == 0:
                continue
            coeff = {"re": v.real, "im": v.imag}
        out.append({"m": m, "n": n, "coeff": coeff})
    return out


class CurvatureReport:
    def __init__(self):
        self.data = {}
        self.failures = []
        self.objects = {}

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2) + "\n"


def _residual_entry(report, name, value, tol, detail=None):
    ok = value == 0 if tol is None else value <= tol
    entry = {"value": _num_json(value), "tolerance": "0" if tol is None else tol, "pass": bool(ok)}
    if detail:
        entry["detail"] = detail
    report.data["residuals"][name] = entry
    if not ok:
        report.failures.append(f"{name}: {_num_json(value)} exceeds {entry['tolerance']}")


def _matrix_json(mat):
    return [[x.to_json() for x in row] for row in mat]


# values printed for the quantum Heisenberg manifold (1-based labels)
QHM_PRINTED_T = {(2, 1, 3): 1, (2, 3, 1): 1}
QHM_PRINTED_L = {(1, 2, 3): Fraction(1, 2), (1, 3, 2): Fraction(1, 2), (2, 1, 3): Fraction(-1, 2),
                 (2, 3, 1): Fraction(-1, 2), (3, 1, 2): Fraction(1, 2), (3, 2, 1): Fraction(1, 2)}
QHM_PRINTED_GAMMA = {(1, 1, 2): 1, (1, 2, 3): Fraction(1, 2), (1, 3, 2): Fraction(1, 2),
                     (2, 1, 2): 1, (2, 1, 3): Fraction(-1, 2), (2, 3, 1): Fraction(-1, 2),
                     (3, 1, 2): Fraction(3, 2), (3, 2, 1): Fraction(1, 2)}
QHM_PRINTED_RICCI = {(1, 1): -1, (2, 2): 1, (1, 3): Fraction(-1, 2), (3, 3): Fraction(-1, 2),
                     (2, 3): Fraction(-1, 2), (1, 2): 0, (2, 1): 0, (3, 1): 0, (3, 2): 0}
QHM_STRUCTURAL_ZEROS = {(1, 2), (2, 1), (3, 1), (3, 2)}
QHM_PRINTED_SCAL = Fraction(-1, 2)


def _crosscheck(claim, published, computed, tol=None, structural=False):
    diff = (published - computed).l1_norm()
    match = diff == 0 if tol is None else diff <= tol
    return {"claim": claim, "paper_value": published.to_json(), "computed": computed.to_json(),
            "match": bool(match), "structural": structural}


def run_scenario(scenario: Scenario) -> CurvatureReport:
    alg = NCTorus(scenario.mode, scenario.theta)
    report = CurvatureReport()
    data = report.data
    data["scenario"] = scenario.to_json()
    data["residuals"] = {}
    data["paths"] = {}
    data["paper_crosschecks"] = []
    conventions = {"commutation": COMMUTATION,
                   "indices": "christoffel[i][j][k] is Gamma^(i+1)_(j+1)(k+1); arrays are 0-based",
                   "coefficients": "right coefficients in the central basis e_1..e_n"}

    if scenario.calculus == "qhm":
        sign, cands = _choose_qhm_sign(alg, scenario.base_connection)
        desc, base, _ = cands[sign]
        conventions["d_e3"] = "+e1^e2" if sign == 1 else "-e1^e2"
        conventions["d_e3_candidates"] = {("+e1^e2" if s == 1 else "-e1^e2"): _num_json(c[2])
                                          for s, c in cands.items()}
    else:
        desc = torus_calculus(alg)
        base = _build_base(desc, scenario.base_connection)
    data["conventions"] = conventions

    if scenario.metric["type"] == "conformal":
        pair = _build_pair(alg, scenario.metric)
        g = MetricSpec.conformal(pair)
    else:
        one = alg.one()
        pair = InvertiblePair(one, one, Fraction(0) if alg.exact else 0.0, 0)
        g = MetricSpec.diagonal()
    g0 = MetricSpec.diagonal()
    probes = _build_probes(desc, scenario.probes)

    tol = None
    if not alg.exact:
        tol = numeric_tolerance(pair, desc, tolerance_multiplier(scenario))
        data["tolerance_policy"] = {"multiplier": tolerance_multiplier(scenario), "value": tol,
                                    "rule": "mult*eps*S + r*S, S=(1+|k|)(1+|k^-1|)(1+max|d_j k|)^2"}

    _residual_entry(report, "inverse", pair.residual_bound, tol)
    _residual_entry(report, "nondegeneracy", nondegeneracy_residual(g, desc), tol)
    _residual_entry(report, "base_torsion", sum(t.norm() for t in torsion(base)), tol)

    if scenario.calculus == "torus":
        base_compat = compat_residual(base, g0)
        _residual_entry(report, "base_compat_g0", max(r.norm() for _, r in base_compat), tol)
        lc = conformal_lc_connection(base, pair, check=False)
        provenance = {"christoffel": "structural"}
        if desc.basis_closed():
            closed = christoffel_closed_form(base, pair)
            _residual_entry(report, "christoffel_paths", lc.difference_norm(closed), tol)
            provenance["christoffel"] = "structural+closed_form"
    else:
        try:
            T = tt_from_nabla0(base, g0)
        except NonScalarCoefficient as exc:
            raise SchemaError("$.base_connection", str(exc)) from exc
        lc0 = qhm_lc_connection(base, T)
        lc = conformal_lc_connection(lc0, pair, check=False) if g.factor else lc0
        provenance = {"christoffel": "base+L"}
        data["structure_constants"] = [
            {"m": m + 1, "i": i + 1, "j": j + 1, "value": alg.scalar(v).to_json()}
            for (m, i, j), v in sorted(T.values.items())]
        report.objects["T"] = T

    res = residual_report(lc, g, base, probes)
    _residual_entry(report, "torsion", sum(res.torsion, Fraction(0) if alg.exact else 0.0), tol,
                    [_num_json(x) for x in res.torsion])
    compat_max = max(v for _, v in res.compat)
    bad = [f"({i + 1},{j + 1},{format_element(a)})" for (i, j, a), v in res.compat
           if (v != 0 if tol is None else v > tol)]
    _residual_entry(report, "compat", compat_max, tol, {"probes": len(res.compat), "failing": bad})
    _residual_entry(report, "dual", res.dual, tol)
    _residual_entry(report, "phi_identity", res.phi_identity, tol)

    rc = curvature_operator(lc)
    ric = ricci(rc)
    scal = scalar_curvature(g, ric, desc)
    data["christoffel"] = lc.to_nested()
    data["ricci"] = _matrix_json(ric)
    data["scalar"] = scal.to_json()
    data["paths"]["definitional"] = {"ricci": data["ricci"], "scalar": data["scalar"],
                                     "curvature": [{"index": [x + 1 for x in key], "value": v.to_json()}
                                                   for key, v in sorted(rc.r.items())]}
    provenance.update({"ricci": "definitional", "scalar": "definitional"})

    if "closed_form" in scenario.outputs:
        if desc.basis_closed():
            rc_cf = closed_form_curvature(lc)
            ric_cf = ricci(rc_cf)
            scal_cf = scalar_curvature(g, ric_cf, desc)
            data["paths"]["closed_form"] = {"ricci": _matrix_json(ric_cf), "scalar": scal_cf.to_json()}
            _residual_entry(report, "curvature_paths", rc.difference_norm(rc_cf), tol)
            provenance["ricci"] = provenance["scalar"] = "both+diff"
        else:
            data["paths"]["closed_form"] = {"skipped": "d(e_i) != 0 for this calculus"}
    if "reference" in scenario.outputs:
        if scenario.calculus == "torus":
            ric_ref, scal_ref = torus_conformal_reference(pair, desc)
            data["paths"]["reference"] = {"ricci": _matrix_json(ric_ref), "scalar": scal_ref.to_json()}
            _residual_entry(report, "ricci_reference", matrix_difference_norm(ric, ric_ref), tol)
            _residual_entry(report, "scalar_reference", (scal - scal_ref).l1_norm(), tol)
            provenance["ricci"] = provenance["scalar"] = "both+diff"
        else:
            data["paths"]["reference"] = {"skipped": "reference formulas exist for the torus only"}
    data["provenance"] = provenance

    if scenario.calculus == "torus":
        _torus_crosschecks(data, pair, desc, ric, scal, tol)
    else:
        _qhm_crosschecks(data, alg, report.objects["T"], lc, base, ric, scal)

    data["evaluated"] = {
        "theta": _num_json(scenario.theta),
        "christoffel": {f"{i + 1}{j + 1}{k + 1}": evaluate_element(v, scenario.theta)
                        for (i, j, k), v in sorted(lc.gamma.items())},
        "ricci": [[evaluate_element(x, scenario.theta) for x in row] for row in ric],
        "scalar": evaluate_element(scal, scenario.theta),
    }
    data["passed"] = report.passed
    data["failures"] = list(report.failures)
    report.objects.update({"desc": desc, "pair": pair, "metric": g, "base": base,
                           "connection": lc, "curvature": rc, "ricci": ric, "scalar": scal,
                           "residuals": res})
    return report


def _torus_crosschecks(data, pair, desc, ric, scal, tol):
    printed_ric, _ = torus_conformal_reference(pair, desc, Fraction(1, 2))
    checks = data["paper_crosschecks"]
    checks.append(_crosscheck("torus Ric(e1,e1) with the printed -1/2 prefactor", printed_ric[0][0], ric[0][0], tol))
    checks.append(_crosscheck("torus Ric(e1,e2) with the printed 1/2 prefactor", printed_ric[0][1], ric[0][1], tol))
    checks.append(_crosscheck("torus Scal, printed final display taken literally",
                              torus_printed_scalar(pair, desc), scal, tol))
    _, printed_scal = torus_conformal_reference(pair, desc, Fraction(1, 2))
    checks.append(_crosscheck("torus Scal, unbracketed form with the printed prefactor",
                              printed_scal, scal, tol))


def _qhm_crosschecks(data, alg, T, lc, base, ric, scal):
    checks = data["paper_crosschecks"]
    sc = alg.scalar
    for (m, i, j), v in sorted(QHM_PRINTED_T.items()):
        checks.append(_crosscheck(f"T^{m}_{i}{j}", sc(v), sc(T[m - 1, i - 1, j - 1])))
    L = lc - base
    for (j, i, m), v in sorted(QHM_PRINTED_L.items()):
        checks.append(_crosscheck(f"L^{j}_{i}{m}", sc(v), L[j - 1, i - 1, m - 1]))
    for (i, j, k), v in sorted(QHM_PRINTED_GAMMA.items()):
        checks.append(_crosscheck(f"Gamma^{i}_{j}{k}", sc(v), lc[i - 1, j - 1, k - 1]))
    extra = sorted(k for k in lc.gamma if tuple(x + 1 for x in k) not in QHM_PRINTED_GAMMA)
    checks.append({"claim": "Gamma symbols outside the printed list vanish",
                   "paper_value": [], "computed": [[x + 1 for x in k] for k in extra],
                   "match": not extra, "structural": False})
    for (j, l), v in sorted(QHM_PRINTED_RICCI.items()):
        checks.append(_crosscheck(f"Ric(e{j},e{l})", sc(v), ric[j - 1][l - 1],
                                  structural=(j, l) in QHM_STRUCTURAL_ZEROS))
    checks.append(_crosscheck("Scal", sc(QHM_PRINTED_SCAL), scal))


def format_table(report: CurvatureReport) -> str:
    data = report.data
    theta = report.data["scenario"].get("theta")
    try:
        theta = parse_rational(theta) if isinstance(theta, (str, int)) else float(theta)
    except (TypeError, ValueError):
        theta = None
    lc = report.objects["connection"]
    lines = [f"scenario: {data['scenario'].get('name')}  ({data['scenario'].get('calculus')}, "
             f"mode={data['scenario'].get('mode')}, theta={data['scenario'].get('theta')})"]
    lines.append("Christoffel symbols (nonzero):")
    if not lc.gamma:
        lines.append("  none")
    for (i, j, k), v in sorted(lc.gamma.items()):
        lines.append(f"  Gamma^{i + 1}_{j + 1}{k + 1} = {format_element(v, theta)}")
    lines.append("Ricci:")
    ric = report.objects["ricci"]
    for j, row in enumerate(ric):
        for l, v in enumerate(row):
            lines.append(f"  Ric(e{j + 1},e{l + 1}) = {format_element(v, theta)}")
    lines.append(f"Scal = {format_element(report.objects['scalar'], theta)}")
    lines.append("Residuals:")
    for name, entry in sorted(data["residuals"].items()):
        lines.append(f"  {name:18s} {'ok  ' if entry['pass'] else 'FAIL'} {entry['value']}")
    if data["paper_crosschecks"]:
        lines.append("Published-value cross-checks:")
        for c in data["paper_crosschecks"]:
            lines.append(f"  {'match   ' if c['match'] else 'mismatch'} {c['claim']}")
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines) + "\n"


def verify(scenario: Scenario, out=None) -> int:
    out = out or sys.stdout
    report = run_scenario(scenario)
    if report.passed:
        print(f"PASS {scenario.name}: all residuals within tolerance", file=out)
        return 0
    for line in report.failures:
        print(f"FAIL {scenario.name}: {line}", file=out)
    return 1
