"""Forward solvers: obstacles via Nystrom CFIE, rough surfaces via panel quadrature."""

from .fields import (FieldMatrix, field_matrix, point_field, read_field_csv, scattered_far,
                     scattered_near, solve, solve_rough_soft, solve_soft_obstacle, write_field_csv)
from .kernels import (FarFieldPattern, IncidentField, far_field_constant, fundamental_2d,
                      halfplane_green, incident_eval, reflect, unit_directions)
from .obstacle import ObstacleDensity, SoftObstacleSolver, obstacle_solver
from .rough import RoughSurfaceSolver, SurfaceDensity, rough_solver
