"""Exact Amitsur cohomology, twisted corings and descent algebras over
finite commutative rings.

Everything is computed exactly over Z/nZ: rings are presented by structure
constants, extensions are free with a declared basis, and all linear
algebra runs through the Howell normal form.  The main entry points:

- rings / extensions: finite rings, tensor powers S^⊗n, face and collapse
  maps of the Amitsur complex;
- amitsur: 2-cocycles, coboundaries, norms, normalization, H^2 by
  exhaustive enumeration, cohomologous-witness search;
- coring: normal-basis corings S⊗S with twisted comultiplication, axiom
  checks, duals, monoidal and external products, base change;
- algebras: twisted endomorphism algebras, the descent algebra A(u) and
  its gamma isomorphism, enveloping-map Azumaya tests;
- classify: cosickle censuses, quotient monoids, Brauer classes,
  refinement comparison;
- cli: deterministic report generation from job files.
"""

__version__ = "0.1.0"

from .rings import (
    DEFAULT_CAP,
    FiniteRing,
    InternalCheckError,
    RingElement,
    RingHom,
    RingTooLarge,
    enumerate_units,
    make_product_ring,
    make_quotient_ring,
    try_invert,
    zmod_ring,
)
from .extensions import Extension, TensorPowerRing, external_extension, rebase_extension
from .amitsur import (
    CohomologyGroup,
    TwistElement,
    base_change_witness,
    check_norm_identities,
    coboundary,
    cohomologous,
    compute_h2,
    delta1,
    delta2,
    is_two_cocycle,
    norm,
    normalize,
    tensor_cocycles,
    unit_twist,
)
from .coring import (
    NormalBasisCoring,
    base_change,
    canonical_coring,
    check_coassociative,
    check_counit,
    coring_tensor,
    dual_coring,
    external_product,
    is_azumaya,
    iso_test,
    recover_twist,
    tilde_delta,
    twisted_coring,
)
from .algebras import (
    DescentAlgebra,
    FiniteAlgebra,
    TwistedAlgebra,
    descent_algebra,
    gamma_map,
    is_azumaya_algebra,
    left_dual_algebra,
    right_dual_algebra,
    untwist_iso,
)
from .classify import (
    BrauerClass,
    CosickleClassification,
    brauer_class,
    classify_all,
    compare_via_refinement,
    is_almost_invertible,
    is_cosickle,
    monoid_quotient,
)

__all__ = [name for name in dir() if not name.startswith("_")]
