"""Exact arithmetic for p-adic Mobius maps and the Berkovich tree."""

from .errors import (BudgetExceeded, DegenerateConfiguration, NotAllElliptic,
                     PadicMobiusError, ParseError, PrecisionExhausted,
                     TypeIPoint, UnsupportedExtension, WrongClass)
from .padic import (FieldElem, HenselRoot, Magnitude, PadicContext,
                    parse_elem, parse_rational)
from .projective import (INFTY, ProjPoint, chordal, cross_ratio_chordal,
                         parse_point, pt)
from .moebius import (ElementClass, MobiusMap, classify, cube_root_displacement,
                      difference_norm, distance_to_unitary_group, fixed_points,
                      gauss_displacement, has_good_reduction, is_unitary,
                      lipschitz_constant, lipschitz_witness,
                      mobius_through_three_points, norm, norm_minus_identity,
                      parse_map, pole_pair_displacement,
                      reference_triple_displacement, relative_difference_norm,
                      uniform_distance, uniform_distance_to_identity,
                      unitary_gap_witness)
from .berkovich import (GAUSS, BerkPoint, act, conjugator_to_gauss,
                        fixes_gauss, hyp_dist, join, median, parse_berk_point,
                        same_point)
from .geometry import (FixedLocus, Geodesic, TailedAxis, antipodal_witness,
                       axis, common_perpendicular,
                       decompose_unitary_loxodromic, factor_involutions,
                       fixed_locus, involution_with_fixed_points,
                       is_orthogonal, locus_contains, locus_intersect,
                       locus_membership, tailed_axis)
from .groups import (CommonFixedPointResult, DiscretenessReport, GroupSpec,
                     OrbitReport, common_fixed_point, discreteness_report,
                     enumerate_ball, orbit_sample)
from .cfrac import (CFSpec, DivergenceCertificate,
                    diverges_classically_unit_case, gap_sequence,
                    nested_value)

__version__ = "0.1.0"
