"""ffheights: exact canonical heights over F_q(T).

Drinfeld-module local/global heights and elliptic-curve canonical heights
over rational function fields, computed in exact arithmetic, with the
verification harnesses (Lehmer sweeps, small-height censuses, torsion and
integral-point bounds) built on top.
"""

from .gf import FieldSpec, NotPrime, field
from .fqpoly import Poly, factor, gcd, irreducibles, is_irreducible
from .ratfunc import DivisionByZero, RatFunc, RatFuncField, ratfunc_normalize
from .places import (DegeneratePolygon, NewtonPolygon, Place, PlaceTable,
                     height_K, newton_polygon, valuation)
from .laurent import NeedsPrecision, PrecisionExhausted, Series
from .completion import Completion
from .extfield import ExtElement, ExtField, IrreducibilityUnknown, rational_roots
from .places_ext import ExtPlace, UnsupportedRamification, places_above
from .heights import KPlace, height, has_pole
from .twisted import TwistedPoly, tau_mul
from .drinfeld import (CAP_EXCEEDED, CERTIFIED_ZERO, EXACT, DrinfeldModule,
                       HeightResult, LocalThresholds, TorsionResult,
                       global_height, is_torsion, local_height,
                       naive_height_estimate, thresholds, twist)
from .sweep import SweepRow, lehmer_sweep, sweep_to_csv
from .elliptic import (CurveProfile, DivisionPolynomials, ECPoint, ECurve,
                       IsotrivialCurve, PlaceData, curve_through,
                       s_minimal_model)
from .ec_heights import (ComponentAmbiguous, HeightInterval, NonSemistablePlace,
                         WidthNotReached, bernoulli2, canonical_height,
                         doubling_interval, duplication_constant, exact_height,
                         neron_local, point_order)
from .ec_census import (CensusResult, IntegralPointsReport, TorsionGroup,
                        generate_curves, generate_curves_with_point,
                        integral_model, integral_points_census, is_square_in_K,
                        lehmer_lang_check, point_search, rank_lower_bound,
                        small_height_census, szpiro_check, torsion_group)

__version__ = "1.0.0"
