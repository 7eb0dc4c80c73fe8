"""Constants for the ntwfsm package."""

DOMAIN = "ntwfsm"

# Text format
FORMAT_MAGIC = "ntwfsm"
FORMAT_VERSION = 1
EPSILON_TOKEN = "<eps>"
COMMENT_CHAR = "#"

# Internal representation of an empty tape component
EPSILON = ""

# Semiring names
SEMIRING_BOOLEAN = "boolean"
SEMIRING_TROPICAL = "tropical"
SEMIRING_REAL = "real"
SEMIRING_LOG = "log"
DEFAULT_SEMIRING = SEMIRING_TROPICAL

# Relative tolerance for comparing real/log weights
WEIGHT_REL_TOL = 1e-9
WEIGHT_ABS_TOL = 1e-12

# Enumeration limits
DEFAULT_PATH_BUDGET = 10**6
DEFAULT_HOP_LIMIT = 10

# Auto-intersection flag policies
FLAG_POLICY_ANY = "any"
FLAG_POLICY_LIVE = "live"

# Edit cost defaults (tropical)
DEFAULT_MATCH_COST = 0.0
DEFAULT_SUBSTITUTION_COST = 1.0
DEFAULT_INSERTION_COST = 1.0
DEFAULT_DELETION_COST = 1.0
GAP_CHAR = "-"

# CLI exit statuses
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCOMPLETE = 2
