from .geometry_core import resample, normals, boundary_distance
from .descriptors import var_descriptor, kappa_global, area_integral_invariant, heron_curvature
from .noising import gaussian_distort, incremental_noising, subsample
from .smoothing import ground_truth_ips, gt_index_map
from .detection import DETECTORS, detect
from .evaluation import density_profile, pr_curve, average_pr
