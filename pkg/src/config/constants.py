"""Constants for training modes, architectures, defaults, and file schemas."""

from enum import Enum


class TrainMode(str, Enum):
    """How the base learner is trained."""

    BASELINE_CE = "baseline_ce"
    OFFLINE_FIXED = "offline_fixed"
    ONLINE_ADALFL = "online_adalfl"

    @property
    def uses_loss_network(self) -> bool:
        return self is not TrainMode.BASELINE_CE


class ActivationKind(str, Enum):
    """Element-wise activation functions available to networks."""

    SMOOTH_LEAKY_RELU = "smooth_leaky_relu"
    RELU = "relu"
    LEAKY_RELU = "leaky_relu"
    SOFTPLUS = "softplus"
    IDENTITY = "identity"


class LossNetMode(str, Enum):
    """Loss network architecture variant."""

    ADALFL = "adalfl"
    ML3_ABLATION = "ml3_ablation"


class ArchKind(str, Enum):
    """Base learner architecture."""

    LOGISTIC = "logistic"
    LINEAR = "linear"
    MLP = "mlp"


class TaskLossKind(str, Enum):
    """Handcrafted task loss used as the meta-objective."""

    CROSS_ENTROPY = "cross_entropy"
    SQUARED_ERROR = "squared_error"


class MetaBatchSource(str, Enum):
    """Split that meta batches are sampled from."""

    TRAIN_SPLIT = "train_split"
    VALID_SPLIT = "valid_split"


class Split(str, Enum):
    """Dataset partitions reported in metrics."""

    TRAIN = "train"
    VALID = "valid"
    TEST = "test"


class DatasetKind(str, Enum):
    """Dataset sources understood by the harness."""

    MNIST = "mnist"
    SYNTHETIC_CLASSIFICATION = "synthetic_classification"
    SYNTHETIC_REGRESSION = "synthetic_regression"


# Learned loss network
LOSS_NET_WIDTH = 40
LOSS_NET_INPUT_DIM = 2
SMOOTH_LEAKY_GAMMA = 0.01
SMOOTH_LEAKY_BETA = 10.0
# beta * x above this uses x + log1p(exp(-x)) for softplus
SOFTPLUS_STABLE_THRESHOLD = 30.0

# Meta-optimization defaults
S_INIT = 2500
S_INNER = 1
S_TRAIN = 5000
ETA_OFFLINE = 1e-3
ETA_ONLINE = 1e-5
BASE_LEARNING_RATE = 0.01
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8

# Any task loss above this (or non-finite) aborts the run
DIVERGENCE_THRESHOLD = 1e6

# Data
MNIST_MEAN = 0.1307
MNIST_STD = 0.3081
MNIST_CLASSES = 10
IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801
VALID_FRACTION = 0.10
BATCH_SIZE = 128
MNIST_FILES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}

# Seed streams. Base-learner init uses the bare seed so every mode starts
# from the same theta_0.
LOSS_NET_SEED_OFFSET = 1_000_003
OFFLINE_RESET_SEED_OFFSET = 2_000_003
TRAIN_STREAM_SEED_OFFSET = 3_000_017
META_STREAM_SEED_OFFSET = 4_000_037
OFFLINE_TRAIN_STREAM_SEED_OFFSET = 5_000_011
OFFLINE_META_STREAM_SEED_OFFSET = 6_000_001

# Loss-surface export grid
SURFACE_GRID_POINTS = 101
SURFACE_GRID_RANGE = (0.0, 1.0)
SURFACE_Y_FIXED = (0.0, 1.0)

# CSV schemas
METRICS_COLUMNS = [
    "run_id", "mode", "seed", "step", "split", "task_loss", "error_rate", "wall_clock_s",
]
SNAPSHOT_COLUMNS = ["run_id", "seed", "step", "y_fixed", "f", "loss"]
SURFACE_COLUMNS = ["y_fixed", "f", "loss"]
SUMMARY_COLUMNS = ["mode", "runs", "mean", "std", "summary"]
TRAJECTORY_COLUMNS = [
    "run_id", "mode", "seed", "step", "theta_norm", "update_norm", "phi_norm", "learned_loss",
]
CSV_FLOAT_FORMAT = "%.17g"

# Output layout
METRICS_FILE = "metrics.csv"
SNAPSHOTS_FILE = "snapshots.csv"
TRAJECTORY_FILE = "trajectory.csv"
LOSS_NET_FILE = "loss_network.npz"
LOSS_NET_INIT_FILE = "loss_network_init.npz"
SUMMARY_DECIMALS = 4


def derive_seed(seed: int, offset: int) -> int:
    """Independent stream seed for a run: seed XOR a fixed per-purpose offset."""
    return int(seed) ^ int(offset)
