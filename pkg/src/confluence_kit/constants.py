import math

# Base point of all monodromy loops in the s-plane.
BASE_POINT = 0.5

TWO_PI = 2.0 * math.pi

# Largest supported system order for the hypergeometric model.
MAX_ORDER = 12

# Largest matrix handed to the dense eigen solver.
MAX_EIG_DIM = 16

# |pivot| below PIVOT_RTOL * ||a||_inf declares the matrix singular.
PIVOT_RTOL = 1e-13

# Distance to a non-positive integer that counts as a Gamma pole.
POLE_DISTANCE = 1e-8

# Integer-difference distance that counts as resonant.
RESONANCE_TOL = 1e-8

# Frobenius series are never evaluated further than this from their center.
SERIES_RADIUS = 0.9

# Consecutive negligible terms required before a series is cut.
SERIES_QUIET_TERMS = 3

SERIES_MAX_TERMS = 5000

# Public cap on the number of c_k coefficients.
CK_MAX_ORDER = 60

# Formal transform truncation cap.
FORMAL_MAX_ORDER = 200

# Gauss-Legendre nodes per quadrature panel.
QUAD_NODES = 32

# Laplace rays are cut where exp(-TAIL_FACTOR) bounds the integrand.
TAIL_FACTOR = 36.0

# Re(exp(-i alpha) z) / |z| below this is outside the Laplace half-plane.
HALF_PLANE_MARGIN = 0.05

# Largest |z| accepted by the Laplace quadrature.
LAPLACE_MAX_Z = 2.0

# Confluent transforms integrate until exp(-CONFLUENT_SPAN) bounds the kernel.
CONFLUENT_SPAN = 40.0

# Borel rays keep this fraction of the eigenvalue gap from singular points.
BOREL_CLEARANCE = 0.05

# Smallest angle (radians) between a Borel ray and a singular direction.
BOREL_ANGLE_CLEARANCE = 0.1

# Series order used for the Borel transform seed.
BOREL_SERIES_ORDER = 60

# Default half-gap eta of the parameter sectors and their minimal |rho|.
SECTOR_ETA = math.pi / 12
SECTOR_MIN_ABS_RHO = 1.0

# Tolerance interval accepted for user supplied tolerances.
TOL_MIN = 1e-14
TOL_MAX = 1e-3

# Series cuts are relative to the leading term and may sit below machine epsilon.
SERIES_TOL_MIN = 1e-18

DEFAULT_RK_TOL = 1e-10
DEFAULT_SERIES_TOL = 1e-16
DEFAULT_QUAD_TOL = 1e-12

# Comparisons switch from relative to absolute below this magnitude.
ABSOLUTE_FLOOR = 1e-8

THREADS_ENV = "CONFLUENCE_KIT_THREADS"

DEBUG_TAG = "[confluence_kit DEBUG]"
