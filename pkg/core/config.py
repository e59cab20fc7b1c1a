"""Shipped defaults and fixed constants for the narrative assessment pipeline.

`app/config.py` builds the effective PipelineConfig from these values;
`config/pipeline.json` mirrors them for users who start from a file.
"""

# Artifact / report schema
SCHEMA_VERSION = 1
REPORT_SCHEMA = "narrative-assessment-report"

# Ingest
# Tracking-parameter drop-list; versioned so reports can state which list was applied.
TRACKING_DROP_LIST_VERSION = 1
TRACKING_PARAMS = ("fbclid", "gclid", "igshid", "s", "ref_src")
TRACKING_PREFIXES = ("utm_",)
DEFAULT_PORTS = {"http": 80, "https": 443}

# Entities
ENTITY_KINDS = ("hashtag", "mention", "domain", "term")

# Narrative detection
WINDOW_LEN = 3600
STRIDE = 3600
THETA_EDGE = 0.1
C_MIN = 3
TAU_LINK = 0.3
Z_EVENT = 3.0
K_TRAILING = 6
CLUSTERER = "components"  # or "label_propagation"

# Coordination
K_WORDS = 5
NUM_PERM = 128
BANDS = 32
ROWS = 4
J_DUP = 0.7
DUP_MIN_ACCOUNTS = 2
SYNC_WINDOW = 60
SYNC_MIN_POSTS = 3
COORDINATION_WEIGHTS = {"dup": 4.0, "sync": 4.0, "span": 1.0}
COORDINATION_BIAS = -4.0

# Agenda
AGENDA_LAMBDA = 0.5

# Credibility
MIN_ACCOUNT_AGE_DAYS = 30
FOLLOWER_SKEW_RATIO = 20.0
BURST_POSTS_PER_HOUR = 20
MIN_FLAGS = 2
HANDLE_PATTERN = r"^[A-Za-z_]+\d{6,}$"
DECEPTION_WEIGHTS = {"lowcred": 0.5, "inauthentic": 0.5}

# Classification
# Hand-set prior, not a fit: equal axis weights with the 0.5 boundary at a
# mean axis score of 0.5 (fused = expit(4 * (d + c + a) - 6)). Run `calibrate`
# on a synth corpus and set classify.calibration_path to replace them.
FUSION_WEIGHTS = {"deception": 4.0, "coordination": 4.0, "agenda": 4.0}
FUSION_BIAS = -6.0
DECISION_THRESHOLD = 0.5
CALIBRATION_LEARNING_RATE = 0.5
CALIBRATION_EPOCHS = 2000
CALIBRATION_L2 = 1e-3
MIN_TRAINING_NARRATIVES = 100
ANNOTATION_HIGH = 0.6
ANNOTATION_LOW = 0.3

# Attribution
COSINE_THRESHOLD = 0.8

# Report
MAX_EVIDENCE_ITEMS = 50
SEED = 7

IMPACT_CAVEAT = "online exposure does not necessarily correspond to offline behavioral changes"
THRESHOLD_NOTE = (
    "decision threshold 0.5 and fusion weights are a stand-in calibrated on synthetic data; "
    "no base rates are assumed"
)
ATTRIBUTION_NOTE = "candidate actor groups (exploratory); not a named attribution"
REACH_NOTE = "reach_upper_bound sums follower counts of unique posting accounts and overcounts exposure"
