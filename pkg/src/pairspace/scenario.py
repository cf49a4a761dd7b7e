"""JSON scenarios: prepare states, transform frames, measure, report.

A scenario is one JSON object.  Complex numbers are written as ``[re, im]``
pairs.  Either ``pair`` or ``composite`` describes the prepared state::

    {
      "schema_version": "1",
      "seed": 7,
      "pair": {"plus": [[1, 0], [0, 0]], "minus": [[0, 0], [1, 0]]},
      "observables": [{"kind": "spin"}, {"kind": "energy", "E": 2.0, "branch": "I"}],
      "frames": [{"beta": [[[0, 0], [1, 0]], [[-1, 0], [0, 0]]],
                  "translation": [0, 0, 0, 1.4142135623730951],
                  "mode": "OperatorInvariant"}],
      "measurements": [{"sector": "+", "outcome": "sample"}]
    }

A composite lists ``factors``, each ``{"sector": "+", "components": [...]}``,
and its measurements name a ``slot`` instead of a sector.
"""

from __future__ import annotations

import json
import re
from typing import Any

import numpy as np

from . import correlations as cr
from . import density as dn
from . import group as gp
from . import measurement as ms
from . import numerics as nx
from . import observables as ob
from .cartan import Sector, SectorVector
from .errors import ParseError, UnknownKind
from .states import PairState, born_probabilities, make_pair_state

SCHEMA_VERSIONS = ("1",)
_TOP_KEYS = {"schema_version", "seed", "pair", "composite", "observables", "frames",
             "measurements"}


# -- parsing -------------------------------------------------------------------------


class _Source:
    """Raw text kept around so field errors can point at a line."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def line_of(self, field: str) -> int | None:
        key = re.split(r"[.\[]", field)[-1].rstrip("]")
        if key.isdigit():
            parts = [p for p in re.split(r"[.\[\]]", field) if p and not p.isdigit()]
            key = parts[-1] if parts else key
        pat = f'"{key}"'
        for i, line in enumerate(self.lines, start=1):
            if pat in line:
                return i
        return None

    def error(self, field: str, msg: str) -> ParseError:
        return ParseError(f"{field}: {msg}", line=self.line_of(field), field=field)


def _complex(src: _Source, value, field: str) -> complex:
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)):
        raise src.error(field, f"expected a complex literal [re, im], got {value!r}")
    z = complex(float(value[0]), float(value[1]))
    if not np.isfinite(z.real) or not np.isfinite(z.imag):
        raise src.error(field, "complex literal is not finite")
    return z


def _cvec(src: _Source, value, field: str, n: int = 2) -> np.ndarray:
    if not isinstance(value, list) or len(value) != n:
        raise src.error(field, f"expected {n} complex literals")
    return np.array([_complex(src, x, f"{field}[{k}]") for k, x in enumerate(value)])


def _cmat(src: _Source, value, field: str, n: int = 2) -> np.ndarray:
    if not isinstance(value, list) or len(value) != n:
        raise src.error(field, f"expected a {n}x{n} matrix of complex literals")
    return np.array([_cvec(src, row, f"{field}[{k}]", n) for k, row in enumerate(value)])


def _real(src: _Source, value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise src.error(field, f"expected a number, got {value!r}")
    return float(value)


def _sector(src: _Source, value, field: str) -> Sector:
    try:
        return Sector.parse(value)
    except ValueError:
        raise src.error(field, f"unknown sector {value!r}") from None


def load(text: str) -> dict:
    """Parse and validate scenario text into plain Python objects."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    src = _Source(text)
    if not isinstance(raw, dict):
        raise ParseError("scenario must be a JSON object", line=1)
    unknown = sorted(set(raw) - _TOP_KEYS)
    if unknown:
        raise src.error(unknown[0], "unknown key")
    version = raw.get("schema_version")
    if str(version) not in SCHEMA_VERSIONS:
        raise src.error("schema_version", f"unsupported version {version!r}")
    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise src.error("seed", "expected a non-negative integer")

    out: dict[str, Any] = {"schema_version": str(version), "seed": seed}
    if ("pair" in raw) == ("composite" in raw):
        raise ParseError("scenario needs exactly one of 'pair' or 'composite'", line=1)
    if "pair" in raw:
        p = raw["pair"]
        if not isinstance(p, dict) or set(p) != {"plus", "minus"}:
            raise src.error("pair", "expected {'plus': ..., 'minus': ...}")
        out["pair"] = {"plus": _cvec(src, p["plus"], "pair.plus"),
                       "minus": _cvec(src, p["minus"], "pair.minus")}
    else:
        c = raw["composite"]
        facs = c.get("factors") if isinstance(c, dict) else None
        if not isinstance(facs, list) or not facs:
            raise src.error("composite.factors", "expected a non-empty list")
        parsed = []
        for k, f in enumerate(facs):
            fld = f"composite.factors[{k}]"
            if not isinstance(f, dict):
                raise src.error(fld, "expected an object")
            parsed.append((_sector(src, f.get("sector"), f"{fld}.sector"),
                           _cvec(src, f.get("components"), f"{fld}.components")))
        out["composite"] = parsed

    obs = []
    for k, o in enumerate(raw.get("observables", [])):
        fld = f"observables[{k}]"
        if not isinstance(o, dict) or "kind" not in o:
            raise src.error(f"{fld}.kind", "observable needs a kind")
        params = {}
        for key, val in o.items():
            if key == "kind":
                continue
            if key == "branch" or key == "sector":
                params[key] = val
            else:
                params[key] = _real(src, val, f"{fld}.{key}")
        obs.append({"kind": o["kind"], **params})
    out["observables"] = obs

    frames = []
    for k, f in enumerate(raw.get("frames", [])):
        fld = f"frames[{k}]"
        if not isinstance(f, dict) or "beta" not in f:
            raise src.error(f"{fld}.beta", "frame needs a beta matrix")
        item = {"beta": _cmat(src, f["beta"], f"{fld}.beta"),
                "mode": f.get("mode", "OperatorInvariant")}
        try:
            cr.Mode.parse(item["mode"])
        except ValueError:
            raise src.error(f"{fld}.mode", f"unknown mode {item['mode']!r}") from None
        if f.get("translation") is not None:
            t = f["translation"]
            if not isinstance(t, list) or len(t) != 4:
                raise src.error(f"{fld}.translation", "expected four real components")
            item["translation"] = [_real(src, x, f"{fld}.translation[{i}]") for i, x in enumerate(t)]
        frames.append(item)
    out["frames"] = frames

    meas = []
    for k, m in enumerate(raw.get("measurements", [])):
        fld = f"measurements[{k}]"
        if not isinstance(m, dict):
            raise src.error(fld, "expected an object")
        outcome = m.get("outcome", "sample")
        if outcome not in (0, 1, "sample") or isinstance(outcome, bool):
            raise src.error(f"{fld}.outcome", "expected 0, 1 or \"sample\"")
        item = {"outcome": outcome}
        if "pair" in out:
            item["sector"] = _sector(src, m.get("sector"), f"{fld}.sector")
        else:
            slot = m.get("slot")
            if isinstance(slot, bool) or not isinstance(slot, int):
                raise src.error(f"{fld}.slot", "expected an integer slot")
            item["slot"] = slot
        meas.append(item)
    out["measurements"] = meas
    return out


def load_file(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return load(fh.read())


# -- execution -----------------------------------------------------------------------


def _num(x) -> float:
    """Round to 12 significant digits so reports do not carry last-bit noise."""
    x = float(x)
    return float(f"{x:.12g}") + 0.0


def _cjson(z) -> list:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def _mjson(m) -> list:
    m = np.asarray(m)
    if m.ndim == 1:
        return [_cjson(z) for z in m]
    return [_mjson(row) for row in m]


def make_observable(spec: dict) -> ob.Observable:
    kind = str(spec["kind"]).lower()
    if kind == "charge":
        return ob.make_charge(spec.get("q", 1.0))
    if kind == "spin":
        return ob.make_spin()
    if kind == "polarization":
        return ob.make_polarization()
    if kind == "energy":
        branch = spec.get("branch", "I")
        return ob.make_energy(spec.get("E", 1.0), None if branch in (None, "total") else branch)
    if kind == "virtual":
        return ob.make_virtual(spec.get("sector", "+")).as_observable()
    raise UnknownKind(f"unknown observable kind {spec['kind']!r}")


def _check(rows: list, cid: str, eq: str, residual: float, tol: float) -> dict:
    row = {"id": cid, "paper_eq": eq, "residual": _num(residual), "pass": bool(residual <= tol)}
    rows.append(row)
    return row


def _frame(spec: dict) -> cr.FrameTransform:
    w = None
    if "translation" in spec:
        w = gp.translation_to_w(spec["translation"])
    return cr.FrameTransform(gp.dyn_element(spec["beta"], w), spec["mode"])


def _run_pair(sc: dict, rng, tol, checks) -> list:
    st = make_pair_state(sc["pair"]["plus"], sc["pair"]["minus"])
    steps = []
    prep = {"step": "prepare", "input": {"plus": _mjson(sc["pair"]["plus"]),
                                         "minus": _mjson(sc["pair"]["minus"])},
            "state": {"plus": _mjson(st.plus.components), "minus": _mjson(st.minus.components)},
            "hilbert_norm2": _num(st.hilbert_norm2),
            "indefinite_norm2": _num(st.indefinite_norm2)}
    for s in Sector:
        w = born_probabilities(st, s)
        prep[f"probabilities{s.value}"] = [_num(x) for x in w]
        _check(checks, f"prepare.born_sum{s.value}", "3.11", abs(sum(w) - 1.0), tol)
        d = dn.density_from_state(st, s)
        prep[f"entropy{s.value}"] = _num(dn.entropy(d))
    _check(checks, "prepare.indefinite_norm", "3.4", abs(st.indefinite_norm2), tol)
    _check(checks, "prepare.hilbert_norm", "3.5", abs(st.hilbert_norm2 - 2.0), tol)
    steps.append(prep)

    observables = [(spec, make_observable(spec)) for spec in sc["observables"]]
    for k, (spec, a) in enumerate(observables):
        rec = {"step": "observable", "index": k, "input": spec}
        for s in Sector:
            vals, _ = ob.spectral_decomposition(a, s)
            rec[f"expectation{s.value}"] = _num(ob.expectation(a, st, s))
            rec[f"spectrum{s.value}"] = [_num(v) for v in vals]
            d = dn.density_from_state(st, s)
            _check(checks, f"observable[{k}].density_route{s.value}", "4.8",
                   abs(dn.density_expectation(d, a) - ob.expectation(a, st, s)), tol)
        _check(checks, f"observable[{k}].pseudo_hermitian", "3.17", a.star_residual(), tol)
        steps.append(rec)

    for k, spec in enumerate(sc["frames"]):
        ft = _frame(spec)
        rep = cr.invariance_report(ft, tol=tol)
        rec = {"step": "frame", "index": k, "mode": ft.mode.value,
               "input": {"beta": _mjson(spec["beta"]),
                         "translation": [_num(x) for x in spec.get("translation", [])]},
               "blocks": {"plus": _mjson(ft.element.u_plus), "minus": _mjson(ft.element.u_minus)},
               "invariance_report": {
                   "pass": rep["pass"],
                   "checks": [{"name": r["name"], "paper_eq": r["eq"], "residual": _num(r["residual"]),
                               "pass": r["pass"]} for r in rep["checks"]]}}
        for r in rep["checks"]:
            _check(checks, f"frame[{k}].{r['name']}", r["eq"], r["residual"], tol)
        moved = cr.transform_state(st, ft)
        _check(checks, f"frame[{k}].amplitudes", "7.12",
               nx.max_abs_diff(moved.as_cartan().components, st.as_cartan().components), tol)
        for s in Sector:
            rec[f"primed_probabilities{s.value}"] = [_num(x) for x in cr.primed_probabilities(st, ft, s)]
        obs_out = []
        for spec_o, a in observables:
            op, entries = cr.transform_observable(a, ft)
            item = {"kind": spec_o["kind"]}
            for s in Sector:
                item[f"entries{s.value}"] = _mjson(entries[s])
                d, _ = cr.diagonalize_primed(entries[s], s)
                item[f"diagonal{s.value}"] = _mjson(d)
            obs_out.append(item)
        rec["observables"] = obs_out
        steps.append(rec)

    for k, m in enumerate(sc["measurements"]):
        s = m["sector"]
        probs = ms.measure_probabilities(st, s)
        outcome = ms.sample_outcome(probs, rng) if m["outcome"] == "sample" else m["outcome"]
        red = ms.reduce_state(st, s, outcome)
        st = PairState(red, st.minus) if s is Sector.PLUS else PairState(st.plus, red)
        repeat = ms.measure_probabilities(st, s)[outcome]
        _check(checks, f"measurement[{k}].repeat", "5.10", abs(repeat - 1.0), 0.0)
        steps.append({"step": "measure", "index": k, "sector": s.value,
                      "requested": m["outcome"], "outcome": outcome,
                      "probabilities": [_num(p) for p in probs],
                      "signed_values": [_num(v) for v in ms.signed_values(st, s)],
                      "state": _mjson(red.components), "repeat_probability": _num(repeat)})
    return steps


def _run_composite(sc: dict, rng, tol, checks) -> list:
    factors = [SectorVector(s, v / np.linalg.norm(v)) for s, v in sc["composite"]]
    cs = dn.compose(factors)
    cd = dn.composite_density(cs)
    steps = []
    prep = {"step": "prepare", "sectors": [f.sector.value for f in factors],
            "factors": [_mjson(f.components) for f in factors],
            "n_plus": cs.n_plus, "n_minus": cs.n_minus,
            "trace": _num(dn.composite_trace(cd)), "signed_value": _num(dn.signed_value(cd)),
            "entropy": _num(dn.matrix_entropy(cd.matrix, tol))}
    _check(checks, "prepare.composite_trace", "4.48", abs(dn.composite_trace(cd) - 1.0), tol)
    steps.append(prep)

    for k, spec in enumerate(sc["observables"]):
        a = make_observable(spec)
        per_slot = []
        for j, f in enumerate(factors):
            ops = [nx.I2] * len(factors)
            ops[j] = a.intrinsic(f.sector)
            dense = dn.dense_expectation(cs, ops).real
            embedded = dn.embed_single(cs, j, a)
            _check(checks, f"observable[{k}].slot[{j}].sign_law", "4.36", abs(dense - embedded), tol)
            per_slot.append({"slot": j, "value": _num(embedded), "sign": dn.sign_law(cs, j),
                             "reduced": _num(dn.reduced_expectation(cd, j, a))})
        steps.append({"step": "observable", "index": k, "input": spec, "slots": per_slot})

    for k, spec in enumerate(sc["frames"]):
        ft = _frame(spec)
        rep = cr.invariance_report(ft, tol=tol)
        for r in rep["checks"]:
            _check(checks, f"frame[{k}].{r['name']}", r["eq"], r["residual"], tol)
        tensor = cr.transform_amplitude_tensor(cs, ft)
        steps.append({"step": "frame", "index": k, "mode": ft.mode.value,
                      "invariance_report": {
                          "pass": rep["pass"],
                          "checks": [{"name": r["name"], "paper_eq": r["eq"],
                                      "residual": _num(r["residual"]), "pass": r["pass"]}
                                     for r in rep["checks"]]},
                      "amplitude_tensor": _mjson(tensor.reshape(-1))})

    for k, m in enumerate(sc["measurements"]):
        j = dn._check_slot(len(cs.factors), m["slot"])
        f = cs.factors[j]
        w = ms.sector_weights(f.components)
        outcome = ms.sample_outcome(w, rng) if m["outcome"] == "sample" else m["outcome"]
        cs = ms.composite_measure(cs, j, outcome)
        repeat = ms.sector_weights(cs.factors[j].components)[outcome]
        _check(checks, f"measurement[{k}].repeat", "5.10", abs(repeat - 1.0), 0.0)
        steps.append({"step": "measure", "index": k, "slot": j, "requested": m["outcome"],
                      "outcome": outcome, "probabilities": [_num(p) for p in w],
                      "state": _mjson(cs.factors[j].components),
                      "repeat_probability": _num(repeat)})
    return steps


def run(sc: dict, tol: float | None = None) -> dict:
    """Execute a parsed scenario; returns ``{"checks": [...], "scenario_steps": [...]}``."""
    tol = nx.default_tol() if tol is None else tol
    rng = np.random.default_rng(sc["seed"])
    checks: list[dict] = []
    if "pair" in sc:
        steps = _run_pair(sc, rng, tol, checks)
    else:
        steps = _run_composite(sc, rng, tol, checks)
    return {"checks": checks, "scenario_steps": steps}
