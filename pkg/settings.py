import os
import sys

from nlab.conf import env_attr, parse_bool

if os.getenv("WCOP_DEV") == "1":
    from dotenv import load_dotenv
    sys.path.append(".")
    load_dotenv("env/develop.env", override=True, verbose=True)

if os.getenv("WCOP_TEST") == "1":
    from dotenv import load_dotenv
    sys.path.append(".")
    load_dotenv("env/testing.env", override=True, verbose=True)

TOOL_VERSION = "1.0.0"
CONFIG_SCHEMA_VERSION = 1

LOG_LEVEL = env_attr("WCOP_LOG_LEVEL", default="WARNING")

OUTPUT_DIR = env_attr("WCOP_OUTPUT_DIR", default="results")
SEED = env_attr("WCOP_SEED", parse_value=int, default=0)

# Сетка в круге
GRID_RADIAL_LEVELS = env_attr("WCOP_GRID_LEVELS", parse_value=int, default=12)
GRID_BETA = env_attr("WCOP_GRID_BETA", parse_value=float, default=0.75)
GRID_BOUNDARY_LAYER = env_attr("WCOP_GRID_BOUNDARY", parse_value=parse_bool, default=True)
GRID_ANGULAR_FACTOR = env_attr("WCOP_GRID_ANGULAR_FACTOR", parse_value=int, default=1)
GRID_MIN_ANGULAR = 16

# Квадратура: Гаусс-Лежандр по r^2, трапеции по углу
QUADRATURE_ORDER = env_attr("WCOP_QUADRATURE_ORDER", parse_value=int, default=48)
QUADRATURE_ANGULAR = env_attr("WCOP_QUADRATURE_ANGULAR", parse_value=int, default=256)

# Константы без конструктивного значения (настраиваются, не утверждаются)
BLOCH_GROWTH_ALPHA = env_attr("WCOP_ALPHA", parse_value=float, default=1.0)
INTERPOLATION_CONSTANT = env_attr("WCOP_INTERPOLATION_C", parse_value=float, default=1.0)

PARABOLIC_TOLERANCE = env_attr("WCOP_PARABOLIC_TOL", parse_value=float, default=1e-10)
BOUNDARY_SNAP_TOLERANCE = 1e-9
BOUNDED_AWAY_THRESHOLD = env_attr("WCOP_BOUNDED_AWAY", parse_value=float, default=1e-6)
REFINEMENT_STABILITY = env_attr("WCOP_REFINEMENT_STABILITY", parse_value=float, default=0.01)
POLE_MARGIN = 1e-9

MAX_PERIOD = 1024
MAX_TRUNCATION = 512
MAX_BINOMIAL_POWER = 30

N_SCHEDULE = [10, 25, 50, 100]
TRUNCATION_SIZES = [16, 32, 64]

# Размеры случайных проверок verify
VERIFY_SANDWICH_SYMBOLS = env_attr("WCOP_VERIFY_SANDWICH_SYMBOLS", parse_value=int, default=10)
VERIFY_SANDWICH_MAX_N = env_attr("WCOP_VERIFY_SANDWICH_MAX_N", parse_value=int, default=50)
VERIFY_CONTRACTIVE_WEIGHTS = env_attr("WCOP_VERIFY_CONTRACTIVE_WEIGHTS", parse_value=int, default=30)
VERIFY_BLASCHKE_PRODUCTS = env_attr("WCOP_VERIFY_BLASCHKE_PRODUCTS", parse_value=int, default=10)
VERIFY_BLASCHKE_WEIGHTS = env_attr("WCOP_VERIFY_BLASCHKE_WEIGHTS", parse_value=int, default=20)
