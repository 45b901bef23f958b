"""
document_service.py
------------------
Service layer shared by the CLI and the API server: turns input documents and
fixture names into validated ringoids and modules, and wraps every operation in
a run_* function returning a Report.
"""

import json
import time
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from api_models import ModuleDocument, Report, RingoidDocument
from catalog import get_ring, resolve_module
from config import DEFAULT_BOUND_COLS
from duality import dual, herzog_check
from eliminations import embed_search, qe_search, vnr_harness
from errors import DocumentError, OracleDisagreement, Rejected
from groups import FinAbGroup
from modules import Module, SortedTuple, build_module, quotient, submodule_generated
from persistence import log_action
from pp_dsl import format_formula, parse_formula
from pp_formula import (
    PpFormula,
    equivalent,
    evaluate,
    implies,
    pp_ideal,
    sampled_formulas,
)
from pp_pairs import (
    PpPair,
    eps_example_table,
    kernel_cokernel_image,
    localized_iso,
    make_morphism,
    make_pair,
    pair_value,
    serre_membership,
)
from purity import (
    abspure_formula_check,
    flat_formula_check,
    is_absolutely_pure,
    is_flat,
    is_pure_epi,
    is_pure_submodule,
)
from ringoid import Ringoid, build_ringoid, is_von_neumann_regular


# === documents ===

def _parse(model, data: Any, what: str):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise DocumentError(f"malformed {what} document at '{where}': {first['msg']}")


def read_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise DocumentError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}")


def _group(moduli: Sequence[int], where: str) -> FinAbGroup:
    try:
        return FinAbGroup(tuple(moduli))
    except ValueError as e:
        raise DocumentError(f"{where}: {e}")


def ringoid_from_document(doc: RingoidDocument) -> Ringoid:
    """Build and validate a ringoid; missing composition entries are zero."""
    objects = list(doc.objects)
    known = set(objects)
    homs, labels = {}, {}
    for h in doc.homs:
        if h.dom not in known or h.cod not in known:
            raise DocumentError(f"hom ({h.dom}, {h.cod}) names an unknown object")
        homs[(h.dom, h.cod)] = _group(h.moduli, f"hom ({h.dom}, {h.cod})")
        if h.labels is not None:
            if len(h.labels) != len(h.moduli):
                raise DocumentError(f"hom ({h.dom}, {h.cod}) has {len(h.moduli)} generators but {len(h.labels)} labels")
            labels[(h.dom, h.cod)] = h.labels
    for P in objects:
        for Q in objects:
            homs.setdefault((P, Q), FinAbGroup(()))

    table = {}
    for P in objects:
        for Q in objects:
            for S in objects:
                nq, nb, ns = homs[(Q, S)].dim, homs[(P, Q)].dim, homs[(P, S)].dim
                table[(P, Q, S)] = [[[0] * ns for _ in range(nb)] for _ in range(nq)]
    for c in doc.compose:
        key = (c.dom, c.mid, c.cod)
        if key not in table:
            raise DocumentError(f"composition entry {key} names an unknown object")
        rows = table[key]
        if c.left >= len(rows) or (rows and c.right >= len(rows[0])):
            raise DocumentError(f"composition entry {key} refers to generator ({c.left}, {c.right}) out of range")
        if len(c.value) != homs[(c.dom, c.cod)].dim:
            raise DocumentError(f"composition value in {key} must have {homs[(c.dom, c.cod)].dim} coordinates")
        rows[c.left][c.right] = list(c.value)

    return build_ringoid(doc.name, objects, homs, table, doc.identities, labels)


def module_from_document(doc: ModuleDocument, R: Ringoid) -> Module:
    """
    Build and validate a module. An action entry gives generator `generator` of
    hom(dom, cod) in the ringoid; on a right module it maps M(cod) to M(dom).
    """
    side = doc.side.value
    fibers = {}
    for P in R.objects:
        if P not in doc.fibers:
            raise DocumentError(f"module has no fiber at {P}")
        fibers[P] = _group(doc.fibers[P], f"fiber {P}")
    actions = {}
    for P in R.objects:
        for Q in R.objects:
            source, target = (P, Q) if side == "left" else (Q, P)
            actions[(source, target)] = [
                [[0] * fibers[target].dim for _ in range(fibers[source].dim)]
                for _ in range(R.hom(P, Q).dim)
            ]
    for a in doc.actions:
        if (a.dom, a.cod) not in R.homs:
            raise DocumentError(f"action entry ({a.dom}, {a.cod}) names an unknown object")
        if a.generator >= R.hom(a.dom, a.cod).dim:
            raise DocumentError(f"hom ({a.dom}, {a.cod}) has no generator {a.generator}")
        key = (a.dom, a.cod) if side == "left" else (a.cod, a.dom)
        actions[key][a.generator] = a.matrix
    return build_module(R, side, fibers, actions, doc.name)


def load_ringoid_file(path: str) -> Ringoid:
    return ringoid_from_document(_parse(RingoidDocument, read_json(path), "ringoid"))


def load_module_file(path: str, R: Optional[Ringoid] = None) -> Module:
    doc = _parse(ModuleDocument, read_json(path), "module")
    return module_from_document(doc, R if R is not None else get_ring(doc.ring))


def parse_tuple(text: str, M: Module) -> SortedTuple:
    """
    Entries separated by ';', each 'P:c1,c2' or just 'c1,c2' on a ring:
    '2' over ℤ/4, '1,0; 1' over a ring with a two-generator fiber,
    'Q:1' over a ringoid.
    """
    sorts, entries = [], []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            P, coords = (s.strip() for s in part.split(":", 1))
        elif M.ringoid.is_ring:
            P, coords = M.objects[0], part
        else:
            raise DocumentError(f"tuple entry {part!r} needs a sort prefix such as 'P:'")
        try:
            values = tuple(int(c) for c in coords.split(",") if c.strip())
        except ValueError:
            raise DocumentError(f"tuple entry {part!r} is not a list of integers")
        if P not in M.fibers:
            raise DocumentError(f"unknown sort {P!r} in tuple entry {part!r}")
        if len(values) != M.fibers[P].dim:
            raise DocumentError(f"entry {part!r} needs {M.fibers[P].dim} coordinates")
        sorts.append(P)
        entries.append(M.fibers[P].reduce(values))
    t = SortedTuple(tuple(sorts), tuple(entries))
    M.check_tuple(t)
    return t


def resolve_ring(ring: Optional[str] = None, ring_file: Optional[str] = None) -> Ringoid:
    if ring_file:
        return load_ringoid_file(ring_file)
    if not ring:
        raise DocumentError("a ring is required: pass a fixture name or a ringoid document")
    return get_ring(ring)


def resolve(R: Ringoid, module: Optional[str], side: str, module_file: Optional[str] = None) -> Module:
    if module_file:
        M = load_module_file(module_file, R)
        if M.side != side:
            raise DocumentError(f"{module_file} holds a {M.side} module, expected {side}")
        return M
    return resolve_module(R, module or "regular", side)


# === reports ===

class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.start = time.perf_counter()

    def timings(self) -> Optional[Dict[str, float]]:
        if not self.enabled:
            return None
        return {"total_seconds": round(time.perf_counter() - self.start, 6)}


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def _dsl(phi: Optional[PpFormula]) -> Optional[str]:
    return format_formula(phi) if phi is not None else None


def _report(command: str, inputs: Dict[str, Any], decision: Any, witnesses: List[Dict[str, Any]], clock: _Clock) -> Report:
    log_action(f"Command '{command}' decided {decision}")
    return Report(command=command, inputs=inputs, decision=decision, witnesses=witnesses, timings=clock.timings())


def _pair(R: Ringoid, side: str, top: str, bottom: str) -> PpPair:
    return make_pair(parse_formula(top, R, side), parse_formula(bottom, R, side, line=2))


# === commands ===

def run_validate(path: str, ring: Optional[str] = None, timings: bool = False) -> Report:
    """Validate a ringoid or module document; a 'ring' key marks a module."""
    clock = _Clock(timings)
    data = read_json(path)
    if isinstance(data, dict) and "ring" in data:
        M = load_module_file(path, get_ring(ring) if ring else None)
        witness = {"kind": "module", "ring": M.ringoid.name, "side": M.side, "order": M.order,
                   "fibers": {P: list(M.fibers[P].moduli) for P in M.objects}}
    else:
        R = load_ringoid_file(path)
        witness = {"kind": "ringoid", "name": R.name, "objects": list(R.objects), "total_order": R.total_order}
    return _report("validate", {"file": path}, "valid", [witness], clock)


def run_eval(R: Ringoid, module: Optional[str], formula: str, side: str = "right",
             method: str = "structured", module_file: Optional[str] = None, timings: bool = False) -> Report:
    clock = _Clock(timings)
    M = resolve(R, module, side, module_file)
    phi = parse_formula(formula, R, side)
    value = evaluate(phi, M, method)
    witness: Dict[str, Any] = {"formula": format_formula(phi), "module": str(M), "order": value.order,
                               "generators": [list(g) for g in value.group.generators if any(g)]}
    if value.order <= 64:
        witness["elements"] = [str(t) for t in value.tuples()]
    inputs = {"ring": R.name, "module": str(M), "formula": formula, "side": side, "method": method}
    return _report("eval", inputs, value.order, [witness], clock)


def run_dual(R: Ringoid, formula: str, side: str = "right", timings: bool = False) -> Report:
    clock = _Clock(timings)
    phi = parse_formula(formula, R, side)
    d = dual(phi)
    witness = {"formula": format_formula(phi), "dual": format_formula(d), "dual_side": d.side,
               "involution": _yes_no(equivalent(dual(d), phi))}
    return _report("dual", {"ring": R.name, "formula": formula, "side": side}, format_formula(d), [witness], clock)


def run_implies(R: Ringoid, premise: str, conclusion: str, side: str = "right", timings: bool = False) -> Report:
    clock = _Clock(timings)
    psi = parse_formula(premise, R, side)
    phi = parse_formula(conclusion, R, side, line=2)
    verdict = implies(psi, phi)
    witnesses = []
    if not verdict:
        C, c = verdict.counterexample
        witnesses.append({"counterexample_module_order": C.order, "tuple": str(c),
                          "note": "free realization of the premise"})
    inputs = {"ring": R.name, "premise": premise, "conclusion": conclusion, "side": side}
    return _report("implies", inputs, _yes_no(bool(verdict)), witnesses, clock)


def run_equiv(R: Ringoid, first: str, second: str, side: str = "right", timings: bool = False) -> Report:
    clock = _Clock(timings)
    phi = parse_formula(first, R, side)
    psi = parse_formula(second, R, side, line=2)
    forward, backward = implies(phi, psi), implies(psi, phi)
    witness = {"forward": _yes_no(bool(forward)), "backward": _yes_no(bool(backward))}
    inputs = {"ring": R.name, "first": first, "second": second, "side": side}
    return _report("equiv", inputs, _yes_no(bool(forward) and bool(backward)), [witness], clock)


def run_ideal(R: Ringoid, formula: str, side: str = "right", timings: bool = False) -> Report:
    clock = _Clock(timings)
    phi = parse_formula(formula, R, side)
    ideal = pp_ideal(phi)
    witness = {"base": ideal.base, "parts": {Q: [list(g) for g in ideal.parts[Q].generators if any(g)] for Q in R.objects},
               "generators": [str(g) for g in ideal.generators], "order": ideal.order}
    return _report("ideal", {"ring": R.name, "formula": formula, "side": side}, ideal.order, [witness], clock)


def run_herzog(R: Ringoid, right_module: str, left_module: str, r: str, s: str, timings: bool = False) -> Report:
    clock = _Clock(timings)
    M = resolve_module(R, right_module, "right")
    N = resolve_module(R, left_module, "left")
    rt, st = parse_tuple(r, M), parse_tuple(s, N)
    result = herzog_check(rt, M, st, N)
    witness: Dict[str, Any] = {"formula": format_formula(result.formula), "dual_formula": format_formula(result.dual_formula),
                               "tensor_class": list(result.tensor_class)}
    if result.status == "nonzero":
        witness["class_order"] = result.class_order
    inputs = {"ring": R.name, "right_module": str(M), "left_module": str(N), "r": r, "s": s}
    decision = "vanishes" if result.status == "witness" else "nonzero"
    return _report("herzog", inputs, decision, [witness], clock)


def run_pure(R: Ringoid, module: Optional[str], sub: str, side: str = "right", epi: bool = False,
             module_file: Optional[str] = None, timings: bool = False) -> Report:
    """The submodule generated by `sub` as a pure submodule, or (epi) the projection onto the quotient."""
    clock = _Clock(timings)
    N = resolve(R, module, side, module_file)
    t = parse_tuple(sub, N)
    S = submodule_generated(N, zip(t.sorts, t.entries))
    inputs = {"ring": R.name, "module": str(N), "sub": sub, "side": side, "epi": epi}
    if epi:
        Q, p = quotient(N, S, f"{N}/<{sub}>")
        result = is_pure_epi(p)
        witness = {"quotient_order": Q.order, "formula": _dsl(result.formula),
                   "lift": str(result.lift) if result.lift is not None else None}
        return _report("pure", inputs, _yes_no(result.pure), [witness], clock)
    _, j = S.embedded
    result = is_pure_submodule(j)
    witness = {"submodule_order": S.order, "split": _yes_no(result.retraction is not None),
               "witness_formula": _dsl(result.witness)}
    return _report("pure", inputs, _yes_no(result.pure), [witness], clock)


def _one_variable_family(R: Ringoid, side: str, bound_vars: int, bound_cols: int) -> List[PpFormula]:
    return sampled_formulas(R, side, max_free=1, max_bound=bound_vars, max_cols=bound_cols)


def run_flat(R: Ringoid, module: Optional[str], side: str = "right", bound_vars: int = 1, bound_cols: int = 2,
             module_file: Optional[str] = None, timings: bool = False) -> Report:
    clock = _Clock(timings)
    M = resolve(R, module, side, module_file)
    result = is_flat(M)
    witnesses: List[Dict[str, Any]] = [{"oracle": "tensor", "flat": _yes_no(result.flat),
                                        "failing_ideal": str(result.failing_ideal) if result.failing_ideal else None}]
    failing = [phi for phi in _one_variable_family(R, side, bound_vars, bound_cols) if not flat_formula_check(M, phi).holds]
    witnesses.append({"oracle": "formula", "flat": _yes_no(not failing), "failing_formulas": [format_formula(f) for f in failing]})
    if result.flat == bool(failing):
        raise OracleDisagreement(f"flatness oracles disagree on {M}")
    return _report("flat", {"ring": R.name, "module": str(M), "side": side}, _yes_no(result.flat), witnesses, clock)


def run_abspure(R: Ringoid, module: Optional[str], side: str = "right", bound_vars: int = 1, bound_cols: int = 2,
                module_file: Optional[str] = None, timings: bool = False) -> Report:
    clock = _Clock(timings)
    M = resolve(R, module, side, module_file)
    result = is_absolutely_pure(M)
    witnesses: List[Dict[str, Any]] = [{"oracle": "baer", "absolutely_pure": _yes_no(result.absolutely_pure),
                                        "failing_ideal": str(result.failing_ideal) if result.failing_ideal else None}]
    failing = [phi for phi in _one_variable_family(R, side, bound_vars, bound_cols) if not abspure_formula_check(M, phi).holds]
    witnesses.append({"oracle": "formula", "absolutely_pure": _yes_no(not failing),
                      "failing_formulas": [format_formula(f) for f in failing]})
    if result.absolutely_pure == bool(failing):
        raise OracleDisagreement(f"absolute purity oracles disagree on {M}")
    return _report("abspure", {"ring": R.name, "module": str(M), "side": side}, _yes_no(result.absolutely_pure), witnesses, clock)


def run_vnr(R: Ringoid, timings: bool = False) -> Report:
    clock = _Clock(timings)
    result = is_von_neumann_regular(R)
    if result.regular:
        witness = {"quasi_inverses": len(result.witnesses)}
    else:
        witness = {"counterexample": str(result.counterexample)}
    return _report("vnr", {"ring": R.name}, _yes_no(result.regular), [witness], clock)


# --- pairs -------------------------------------------------------------------

def run_pair_value(R: Ringoid, top: str, bottom: str, module: Optional[str], side: str = "right", timings: bool = False) -> Report:
    clock = _Clock(timings)
    p = _pair(R, side, top, bottom)
    M = resolve_module(R, module or "regular", side)
    value = pair_value(p, M)
    witness = {"pair": str(p), "module": str(M), "invariant_factors": list(value.group.moduli)}
    inputs = {"ring": R.name, "top": top, "bottom": bottom, "module": str(M), "side": side}
    return _report("pairs value", inputs, value.order, [witness], clock)


def run_morphism_check(R: Ringoid, rho: str, source: tuple, target: tuple, side: str = "right",
                       timings: bool = False) -> Report:
    """source and target are (top, bottom) texts; ρ lists the source variables first."""
    clock = _Clock(timings)
    p, q = _pair(R, side, *source), _pair(R, side, *target)
    formula = parse_formula(rho, R, side, line=3)
    inputs = {"ring": R.name, "rho": rho, "source": list(source), "target": list(target), "side": side}
    try:
        make_morphism(formula, p, q)
    except Rejected as e:
        C, c = e.counterexample if e.counterexample else (None, None)
        witness = {"condition": e.condition, "reason": str(e),
                   "counterexample_order": C.order if C is not None else None}
        return _report("pairs morphism-check", inputs, "no", [witness], clock)
    return _report("pairs morphism-check", inputs, "yes", [{"rho": format_formula(formula)}], clock)


def run_kernel(R: Ringoid, rho: str, source: tuple, target: tuple, side: str = "right", timings: bool = False) -> Report:
    clock = _Clock(timings)
    p, q = _pair(R, side, *source), _pair(R, side, *target)
    m = make_morphism(parse_formula(rho, R, side, line=3), p, q)
    parts = kernel_cokernel_image(m)
    witnesses = [
        {"part": name, "top": format_formula(pair.top), "bottom": format_formula(pair.bottom)}
        for name, pair in (("kernel", parts.kernel), ("image", parts.image), ("cokernel", parts.cokernel))
    ]
    inputs = {"ring": R.name, "rho": rho, "source": list(source), "target": list(target), "side": side}
    return _report("pairs kernel", inputs, "computed", witnesses, clock)


def _generators(R: Ringoid, names: Optional[str], side: str) -> List[Module]:
    return [resolve_module(R, n, side) for n in (names or "regular").split(",") if n.strip()]


def run_serre(R: Ringoid, top: str, bottom: str, generators: Optional[str] = None, side: str = "right",
              timings: bool = False) -> Report:
    clock = _Clock(timings)
    p = _pair(R, side, top, bottom)
    mods = _generators(R, generators, side)
    member = serre_membership(p, mods)
    witness = {"values": {str(M): pair_value(p, M).order for M in mods}}
    inputs = {"ring": R.name, "top": top, "bottom": bottom, "generators": [str(M) for M in mods], "side": side}
    return _report("pairs serre", inputs, _yes_no(member), [witness], clock)


def run_loc_iso(R: Ringoid, first: tuple, second: tuple, generators: Optional[str] = None, side: str = "right",
                bound: int = 64, timings: bool = False) -> Report:
    clock = _Clock(timings)
    p, q = _pair(R, side, *first), _pair(R, side, *second)
    mods = _generators(R, generators, side)
    result = localized_iso(p, q, mods, bound)
    witness: Dict[str, Any] = {"status": result.status, "certificate": result.certificate}
    if result.morphism is not None:
        witness["rho"] = format_formula(result.morphism.rho)
        witness["direction"] = result.direction
    decision = {"iso": "yes", "not_iso": "no"}.get(result.status, "not_found_within_bound")
    inputs = {"ring": R.name, "first": list(first), "second": list(second),
              "generators": [str(M) for M in mods], "side": side, "bound": bound}
    return _report("pairs loc-iso", inputs, decision, [witness], clock)


def run_demo_eps(field: str = "f2", timings: bool = False, command: str = "demo-4-3") -> Report:
    """Orders of the five sorts over F_p[ε] on R ⊕ S₁, Serre membership and localisation."""
    clock = _Clock(timings)
    ring = {"f2": "f2e", "f3": "f3e"}.get(field, field)
    R = get_ring(ring)
    table = eps_example_table(R)
    witnesses = [
        {"sort": name, "order_on_R_plus_S1": table["orders"][name], "serre_member": _yes_no(table["serre"][name])}
        for name in table["orders"]
    ]
    witnesses.append({"localized_iso": table["localized_iso"]})
    decision = [table["orders"][name] for name in table["orders"]]
    return _report(command, {"ring": R.name}, decision, witnesses, clock)


# --- eliminations --------------------------------------------------------------

def run_qe(R: Ringoid, formula: str, side: str = "right", bound_cols: int = DEFAULT_BOUND_COLS, timings: bool = False) -> Report:
    clock = _Clock(timings)
    phi = parse_formula(formula, R, side)
    result = qe_search(phi, bound_cols)
    witness: Dict[str, Any] = {"status": result.status, "checked": result.checked,
                               "quantifier_free": _dsl(result.formula)}
    if result.candidates:
        witness["candidates"] = [format_formula(c) for c in result.candidates]
    inputs = {"ring": R.name, "formula": formula, "side": side, "bound_cols": bound_cols}
    return _report("qe", inputs, result.status, [witness], clock)


def run_embed(R: Ringoid, top: str, bottom: str, side: str = "right", bound: int = 64, timings: bool = False) -> Report:
    clock = _Clock(timings)
    p = _pair(R, side, top, bottom)
    result = embed_search(p, bound=bound)
    witness: Dict[str, Any] = {"status": result.status, "home": list(result.home), "certificate": result.certificate}
    if result.morphism is not None:
        witness["rho"] = format_formula(result.morphism.rho)
    inputs = {"ring": R.name, "top": top, "bottom": bottom, "side": side, "bound": bound}
    return _report("embed", inputs, result.status, [witness], clock)


def run_vnr_harness(R: Ringoid, side: str = "right", bound_vars: int = 1, bound_cols: int = 1,
                    timings: bool = False, free_vars: int = 1) -> Report:
    clock = _Clock(timings)
    report = vnr_harness(R, side, bound_vars=bound_vars, bound_cols=bound_cols, max_free=free_vars)
    witnesses: List[Dict[str, Any]] = [
        {"kind": item.kind, "subject": item.subject, "status": item.status, "result": item.result}
        for item in report.items
    ]
    witnesses.append({"regular": _yes_no(report.regular), "counterexample": report.counterexample,
                      "anomalies": report.anomalies})
    inputs = {"ring": R.name, "side": side, "free_vars": free_vars, "bound_vars": bound_vars, "bound_cols": bound_cols}
    decision = "anomalies" if report.anomalies else ("regular" if report.regular else "not_regular")
    return _report("vnr-harness", inputs, decision, witnesses, clock)


def report_lines(report: Report) -> List[str]:
    """Human-readable lines for a report."""
    lines = [f"{report.command}: {report.decision}"]
    for w in report.witnesses:
        lines.append("  " + ", ".join(f"{k}={v}" for k, v in w.items() if v is not None))
    if report.timings:
        lines.append(f"  time: {report.timings['total_seconds']:.3f}s")
    return lines

