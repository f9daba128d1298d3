"""Orchestration shared by the CLI and the HTTP service.

Each run_* function takes an elaborated InstanceSpec plus overrides and
returns a RunResult: an exit code (0 success, 1 certification failure, 2 is
reserved for input errors, raised as exceptions) and a JSON-ready report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from .catalog import builtin_source
from .checks import CheckList
from .dsl import InstanceSpec, parse, render
from .foliations import foliation_report, levi_civita, volume_identity
from .forms import Form, Vector
from .liealg import JacobiError, LieAlgebra
from .linalg import Matrix
from .metrics import (
    DEFAULT_KAPPA,
    DEFAULT_TOL,
    McpCertificate,
    MetricError,
    MetricTensor,
    PhiTensor,
    build_associated_metric,
    check_associated,
    decomposability_check,
    structure_tensor_checks,
)
from .pairs import ContactPair, PairError, build_contact_pair, pair_checks
from .reports import (
    distribution_json,
    foliation_json,
    vector_json,
    volume_json,
)


class InputError(ValueError):
    """Bad invocation or malformed/incomplete input; maps to exit code 2."""


@dataclass
class RunResult:
    exit_code: int
    report: dict

    @property
    def ok(self) -> bool:
        return self.exit_code == 0


def load_instance(
    builtin_name: str | None = None,
    file_path: str | None = None,
    text: str | None = None,
) -> tuple[str, InstanceSpec]:
    """Resolve exactly one input source to (display name, parsed instance)."""
    sources = [s for s in (builtin_name, file_path, text) if s is not None]
    if len(sources) != 1:
        raise InputError("exactly one input source is required (builtin, file, or text)")
    if builtin_name is not None:
        return builtin_name, parse(builtin_source(builtin_name))
    if file_path is not None:
        p = Path(file_path)
        if not p.is_file():
            raise InputError(f"no such file: {file_path}")
        return p.name, parse(p.read_text(encoding="utf-8"))
    return "<inline>", parse(text)


def resolve_config(
    spec: InstanceSpec, kappa: Fraction | None, tol: float | None
) -> tuple[Fraction, float]:
    """Priority: explicit override, then instance config block, then defaults."""
    k = kappa if kappa is not None else (spec.kappa if spec.kappa is not None else DEFAULT_KAPPA)
    t = tol if tol is not None else (spec.tol if spec.tol is not None else DEFAULT_TOL)
    if k <= 0:
        raise InputError("kappa must be a positive rational")
    if t <= 0:
        raise InputError("tol must be positive")
    return k, t


def _header(command: str, name: str, kappa: Fraction, tol: float) -> dict:
    return {
        "command": command,
        "instance": name,
        "kappa": str(kappa),
        "tolerance": tol,
    }


def _algebra_section(spec: InstanceSpec) -> tuple[LieAlgebra | None, CheckList, dict]:
    checks = CheckList()
    section: dict = {
        "name": spec.name,
        "dim": spec.n,
        "coframe": list(spec.coframe),
        "structure_equations": {
            spec.coframe[k]: spec.equations[k].render(spec.coframe)
            for k in sorted(spec.equations)
        },
    }
    try:
        L = LieAlgebra.from_structure_equations(spec.n, spec.equations, spec.coframe)
    except JacobiError as e:
        i, j, k = e.witness
        checks.add(
            "algebra.jacobi", False,
            f"fails on (X{i + 1}, X{j + 1}, X{k + 1}); residual "
            f"{vector_json(e.residual, _frame(spec.n))['pretty']}",
        )
        section["nilpotency_depth"] = None
        return None, checks, section
    checks.add("algebra.jacobi", True, "Jacobi identity holds on all basis triples")
    checks.add("algebra.d_squared_zero", _d_squared_zero(L), "d(d(w)) = 0 on all basis monomials")
    checks.add(
        "algebra.structure_equation_roundtrip",
        L.structure_equations() == dict(spec.equations),
        "differential of the coframe reproduces the input equations",
    )
    section["nilpotency_depth"] = L.nilpotency_depth()
    return L, checks, section


def _frame(n: int) -> tuple[str, ...]:
    return tuple(f"X{i + 1}" for i in range(n))


def _d_squared_zero(L: LieAlgebra) -> bool:
    for p in range(0, max(L.n - 1, 0)):
        for idx in combinations(range(L.n), p):
            mono = Form.monomial(L.n, idx)
            if not L.differential(L.differential(mono)).is_zero():
                return False
    return True


def _pair_section(L: LieAlgebra, spec: InstanceSpec) -> tuple[ContactPair | None, CheckList, dict]:
    checks = CheckList()
    frame = _frame(spec.n)
    try:
        pair = build_contact_pair(L, spec.alpha1, spec.alpha2)
    except PairError as e:
        checks.add("pair.valid", False, f"{e.reason}: {e}")
        return None, checks, {"valid": False, "reason": e.reason, "detail": str(e)}
    checks.add("pair.valid", True, f"contact pair of type ({pair.h}, {pair.k})")
    checks.extend(pair_checks(pair))
    section = {
        "type": [pair.h, pair.k],
        "reeb": {
            "Z1": vector_json(pair.Z1, frame),
            "Z2": vector_json(pair.Z2, frame),
        },
        "TF1": distribution_json(pair.TF1, frame),
        "TF2": distribution_json(pair.TF2, frame),
        "TG1": distribution_json(pair.TG1, frame),
        "TG2": distribution_json(pair.TG2, frame),
    }
    return pair, checks, section


def _metric_tensor(spec: InstanceSpec, checks: CheckList) -> MetricTensor | None:
    try:
        g = MetricTensor(spec.metric)
    except MetricError as e:
        checks.add("metric.positive_definite", False, str(e))
        return None
    checks.add("metric.positive_definite", True, "leading principal minors positive")
    return g


def _metric_section(
    pair: ContactPair, spec: InstanceSpec, kappa: Fraction
) -> tuple[MetricTensor | None, PhiTensor | None, McpCertificate | None, CheckList, dict]:
    checks = CheckList()
    g = _metric_tensor(spec, checks)
    if g is None:
        return None, None, None, checks, {"positive_definite": False}
    declared_phi = PhiTensor(spec.phi) if spec.phi is not None else None
    phi, cert = check_associated(pair, g, kappa, declared_phi)
    checks.extend(cert.checks)
    frame = _frame(spec.n)
    section = {
        "positive_definite": True,
        "flags": cert.all_flags(),
        "phi": {
            f"X{j + 1}": vector_json(Vector(phi.P.column(j)), frame)["pretty"]
            for j in range(spec.n)
        },
    }
    return g, phi, cert, checks, section


def _foliation_section(
    L: LieAlgebra,
    pair: ContactPair,
    g: MetricTensor,
    cert: McpCertificate,
    spec: InstanceSpec,
) -> tuple[CheckList, dict]:
    checks = CheckList()
    conn = levi_civita(L, g)
    checks.add("connection.certified", True, "torsion-free and metric-compatible")
    frame, coframe = _frame(spec.n), spec.coframe
    section: dict = {"foliations": []}
    for name, D in (("TF1", pair.TF1), ("TF2", pair.TF2)):
        rep = foliation_report(conn, D, name)
        section["foliations"].append(foliation_json(rep, frame, coframe))
        checks.add(
            f"foliation.{name}_oracles_agree", rep.oracles_agree,
            f"mean-curvature verdict {rep.minimal} vs Rummler verdict {rep.rummler_minimal}",
        )
        # minimality of the characteristic foliations is only guaranteed for an
        # associated metric with decomposable structure tensor, so the claim is
        # only asserted under that hypothesis
        if cert.associated and cert.decomposable:
            checks.add(
                f"foliation.{name}_minimal", rep.minimal,
                "mean curvature vanishes" if rep.minimal
                else f"H = {vector_json(rep.mean_curvature, frame)['pretty']}",
            )
    if cert.decomposable:
        vol = volume_identity(pair, g, cert)
        section["volume"] = volume_json(vol)
        checks.add(
            "volume.identity", vol.ok,
            f"(rhs coefficient)^2 = {vol.rhs_coeff**2}, det g = {vol.lhs_sq}",
        )
    else:
        section["volume"] = {"skipped": "requires a decomposable structure tensor"}
    return checks, section


def run_validate(
    name: str, spec: InstanceSpec, kappa: Fraction | None = None, tol: float | None = None
) -> RunResult:
    k, t = resolve_config(spec, kappa, tol)
    L, checks, section = _algebra_section(spec)
    report = _header("validate", name, k, t)
    report["algebra"] = section
    report["checks"] = [c.as_dict() for c in checks.checks]
    report["ok"] = checks.all_ok()
    return RunResult(0 if report["ok"] else 1, report)


def _require_pair_spec(spec: InstanceSpec) -> None:
    if spec.alpha1 is None or spec.alpha2 is None:
        raise InputError("instance declares no pair block")


def run_detect(
    name: str, spec: InstanceSpec, kappa: Fraction | None = None, tol: float | None = None
) -> RunResult:
    k, t = resolve_config(spec, kappa, tol)
    _require_pair_spec(spec)
    report = _header("detect", name, k, t)
    L, checks, alg_section = _algebra_section(spec)
    report["algebra"] = alg_section
    if L is None:
        report["checks"] = [c.as_dict() for c in checks.checks]
        report["ok"] = False
        return RunResult(1, report)
    pair, pchecks, pair_section = _pair_section(L, spec)
    checks.extend(pchecks)
    report["pair"] = pair_section
    report["checks"] = [c.as_dict() for c in checks.checks]
    report["ok"] = checks.all_ok()
    return RunResult(0 if report["ok"] else 1, report)


def run_certify(
    name: str, spec: InstanceSpec, kappa: Fraction | None = None, tol: float | None = None
) -> RunResult:
    k, t = resolve_config(spec, kappa, tol)
    if spec.phi is not None and spec.alpha1 is None:
        raise InputError("phi block requires a pair block")
    report = _header("certify", name, k, t)
    gating = CheckList()
    L, achecks, alg_section = _algebra_section(spec)
    gating.extend(achecks)
    report["algebra"] = alg_section

    pair = None
    if L is not None and spec.alpha1 is not None:
        pair, pchecks, pair_section = _pair_section(L, spec)
        gating.extend(pchecks)
        report["pair"] = pair_section

    if L is not None and spec.metric is not None and pair is not None:
        g, phi, cert, mchecks, m_section = _metric_section(pair, spec, k)
        gating.extend(mchecks)
        report["metric"] = m_section
        if g is not None and cert is not None:
            fchecks, f_section = _foliation_section(L, pair, g, cert, spec)
            gating.extend(fchecks)
            report.update(f_section)
            report["flags"] = cert.all_flags()
    elif L is not None and spec.metric is not None:
        mchecks = CheckList()
        _metric_tensor(spec, mchecks)
        gating.extend(mchecks)
        report["metric"] = {"positive_definite": mchecks.all_ok()}
    elif spec.phi is not None and pair is not None:
        phi = PhiTensor(spec.phi)
        st = structure_tensor_checks(pair, phi)
        gating.extend(st)
        decomp = decomposability_check(pair, phi, assert_tg_equality=st.all_ok())
        report["flags"] = {"decomposable": decomp.ok}
        report["checks_note"] = "phi declared without metric: structure identities only"

    gated = _gated_checks(gating)
    report["checks"] = [c.as_dict() for c in gating.checks]
    report["ok"] = all(c.ok for c in gated)
    return RunResult(0 if report["ok"] else 1, report)


_UNGATED = ("phi.decomposable", "metric.orthogonal_foliations")


def _gated_checks(checks: CheckList) -> list:
    """Checks that decide the exit code.

    Decomposability and orthogonality are reported properties, not claims:
    a certified associated instance may legitimately have either verdict, as
    long as the equivalence cross-check ties them together.
    """
    return [c for c in checks.checks if c.name not in _UNGATED]


def _random_seed_metric(n: int, rng: random.Random) -> MetricTensor:
    A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    M = Matrix(A)
    G = M.transpose() @ M + Matrix.identity(n).scale(n + 1)
    return MetricTensor(G)


def run_associate(
    name: str,
    spec: InstanceSpec,
    kappa: Fraction | None = None,
    tol: float | None = None,
    seed: str = "identity",
    rng_seed: int | None = None,
    out_path: str | None = None,
) -> RunResult:
    k, t = resolve_config(spec, kappa, tol)
    _require_pair_spec(spec)
    L, achecks, _ = _algebra_section(spec)
    if L is None:
        raise InputError("algebra fails the Jacobi identity; associate needs a valid algebra")
    try:
        pair = build_contact_pair(L, spec.alpha1, spec.alpha2)
    except PairError as e:
        report = _header("associate", name, k, t)
        report["pair"] = {"valid": False, "reason": e.reason, "detail": str(e)}
        report["checks"] = [{"name": "pair.valid", "ok": False, "detail": str(e)}]
        report["ok"] = False
        return RunResult(1, report)

    if seed == "identity":
        seed_metric = MetricTensor(Matrix.identity(spec.n))
    elif seed == "instance":
        if spec.metric is None:
            raise InputError("seed 'instance' requires a metric block")
        seed_metric = MetricTensor(spec.metric)
    elif seed == "random":
        rng = random.Random(rng_seed)
        seed_metric = _random_seed_metric(spec.n, rng)
    else:
        raise InputError(f"unknown seed mode {seed!r} (identity, instance, random)")

    result = build_associated_metric(pair, seed_metric, k)
    report = _header("associate", name, k, t)
    report["seed"] = seed
    if rng_seed is not None:
        report["rng_seed"] = rng_seed
    report["residuals"] = {key: float(v) for key, v in sorted(result.residuals.items())}
    report["max_residual"] = result.max_residual()
    report["volume_coefficient"] = result.volume_coefficient
    report["metric_rows"] = [[float(x) for x in row] for row in result.G.tolist()]
    report["phi_rows"] = [[float(x) for x in row] for row in result.P.tolist()]
    report["ok"] = result.max_residual() <= t
    if out_path is not None:
        out_spec = _rationalized_spec(spec, result.G, result.P, k, t)
        Path(out_path).write_text(render(out_spec), encoding="utf-8")
        report["out"] = str(out_path)
    return RunResult(0 if report["ok"] else 1, report)


def _rationalized_spec(spec: InstanceSpec, G, P, kappa: Fraction, tol: float) -> InstanceSpec:
    """Float output snapped to rationals for the rational-only file format."""

    def snap(x: float) -> Fraction:
        return Fraction(float(x)).limit_denominator(10**6)

    n = spec.n
    Gr = [[snap(G[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            Gr[j][i] = Gr[i][j]
    Pr = [[snap(P[i][j]) for j in range(n)] for i in range(n)]
    return InstanceSpec(
        name=spec.name,
        n=n,
        coframe=spec.coframe,
        equations=dict(spec.equations),
        alpha1=spec.alpha1,
        alpha2=spec.alpha2,
        metric=Matrix(Gr),
        phi=Matrix(Pr),
        kappa=kappa,
        tol=tol,
    )
