"""Numerical hyperkahler structures on complexified Hermitian-symmetric
adjoint orbits of the unitary family, at finite matrix scale."""

__version__ = "0.1.0"

from .algebra import (AlgebraContext, Element, bracket, build_context,
                      complex_structure_I, inner, project, random_element)
from .mostow import (FiberedPoint, decompose, fiber_coordinate, fiber_point,
                     forward, hessian_form, pi_pushforward, project_pi, rho,
                     rho_inverse)
from .orbit import (OrbitPointC, SubspacePair, TangentVecC, ad_D,
                    kahler_metric_O, kks_form, orbit_point, pair_from_point,
                    point_from_pair)
from .roots import SOSystem, build_sos, curvature_R, to_abelian_coords
from .speccalc import KERNELS, AdKernel, apply_ad_function, apply_operator_function
from .hyperkahler import (HKFrame, I1, I2, I3, hk_frame, metric_g, omega1,
                          omega_C, potential_K, quaternion_report)
from .tangent import (A_operator, J3, TangentBundlePoint, TBVector, f1, f2,
                      liouville_Omega3, metric_gtilde, tb_frame, tb_point,
                      tb_vector, upsilon, upsilon_pushforward)

__all__ = [name for name in dir() if not name.startswith("_")]
