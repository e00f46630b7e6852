"""calibscope: calibration metrics for probabilistic classifiers."""

__version__ = "0.1.0"

from .beyond import ClasswiseReport, MulticlassGroupReport, classwise_ece, multiclass_report
from .binning import (
    BinAssignment,
    BinStats,
    EqualMass,
    EqualWidth,
    Sweep,
    assign_equal_mass,
    assign_equal_width,
    bin_stats,
    equal_width_edges,
)
from .confidence import CalibrationReport, ece, ece_sweep, reliability_data
from .core import (
    Dataset,
    PredictionRecord,
    ProbVector,
    argmax_class,
    entropy,
    max_confidence,
    tvd,
    validate_simplex,
)
from .errors import (
    ArgumentError,
    CalibError,
    DimensionError,
    IoError,
    LengthError,
    MissingLabelError,
    MissingSoftLabelError,
    ParseError,
    SchemaError,
    SimplexError,
)
from .human import HumanCalibReport, distce, entce, human_report, rankcs, votes_to_distribution
from .io import IngestOptions, emit_dataset, emit_report, ingest, load_report
from .synth import (
    CalibratedWorld,
    Distorted,
    MajorityPathology,
    distort_temperature,
    gen_calibrated_world,
    gen_majority_pathology,
)
