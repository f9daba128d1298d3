"""Exact certification of metric contact pair geometry on Lie algebras."""

from .catalog import UnknownBuiltinError, builtin, builtin_names, builtin_source
from .checks import Check, CheckList
from .dsl import DslError, InstanceSpec, parse, render
from .foliations import (
    Connection,
    FoliationReport,
    ScaledForm,
    VolumeIdentity,
    characteristic_form,
    foliation_report,
    levi_civita,
    mean_curvature,
    rummler_minimal,
    second_fundamental_form,
    volume_identity,
)
from .forms import Form, Vector
from .liealg import Distribution, JacobiError, LieAlgebra, is_subalgebra
from .linalg import LinAlgError, Matrix
from .metrics import (
    DEFAULT_KAPPA,
    DEFAULT_TOL,
    AssociateResult,
    McpCertificate,
    MetricError,
    MetricTensor,
    PhiTensor,
    build_associated_metric,
    check_associated,
    phi_basis,
    phi_from_metric,
)
from .pairs import (
    ContactPair,
    PairError,
    build_contact_pair,
    characteristic_distributions,
    detect_type,
    pair_checks,
    reeb_vector_fields,
)
from .pipeline import (
    InputError,
    RunResult,
    load_instance,
    run_associate,
    run_certify,
    run_detect,
    run_validate,
)

__version__ = "0.1.0"

__all__ = [
    "AssociateResult",
    "Check",
    "CheckList",
    "Connection",
    "ContactPair",
    "DEFAULT_KAPPA",
    "DEFAULT_TOL",
    "Distribution",
    "DslError",
    "FoliationReport",
    "Form",
    "InputError",
    "InstanceSpec",
    "JacobiError",
    "LieAlgebra",
    "LinAlgError",
    "Matrix",
    "McpCertificate",
    "MetricError",
    "MetricTensor",
    "PairError",
    "PhiTensor",
    "RunResult",
    "ScaledForm",
    "UnknownBuiltinError",
    "Vector",
    "VolumeIdentity",
    "build_associated_metric",
    "build_contact_pair",
    "builtin",
    "builtin_names",
    "builtin_source",
    "characteristic_distributions",
    "characteristic_form",
    "check_associated",
    "detect_type",
    "foliation_report",
    "is_subalgebra",
    "levi_civita",
    "load_instance",
    "mean_curvature",
    "pair_checks",
    "parse",
    "phi_basis",
    "phi_from_metric",
    "reeb_vector_fields",
    "render",
    "rummler_minimal",
    "run_associate",
    "run_certify",
    "run_detect",
    "run_validate",
    "second_fundamental_form",
    "volume_identity",
]
