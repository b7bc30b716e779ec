"""Executable coefficient theory for the Salagean-operator class T_n^alpha(beta)."""

from ._kernels import BACKEND
from .bounds import (
    BoundVariant,
    bound_a2,
    bound_a3,
    bound_a4,
    distortion_bounds,
    fekete_szego_bound,
)
from .classes import (
    AtomMeasure,
    ClassParams,
    Constant,
    MembershipReport,
    Monomial,
    NormalizedPolynomial,
    bernardi_transform,
    caratheodory_from_atoms,
    check_membership,
    koebe,
    member_from_caratheodory,
    member_from_schwarz,
    rotated_koebe,
)
from .errors import BadMeasure, DomainError, InversionDivergence, NonUnitConstantTerm
from .fuzz import AuditRecord, Functional, audit_suite, empirical_max, random_member
from .series import (
    NormalizedFunction,
    TruncatedSeries,
    derivative,
    eval_series,
    integral_coeffwise,
    mul,
    pow_real,
    salagean_normalized,
    tail_bound,
)

__version__ = "0.1.0"
