"""Crossing-sequence coding and concentration-witness searches on the
Poincare disc, for an explicit two-generator Schottky group."""

__version__ = "0.1.0"

from .classify import (
    ConicalProbe,
    Evidence,
    HierarchyReport,
    NonRecurrenceCertificate,
    RecurrenceVerdict,
    SequenceVerdicts,
    certify_family_nonrecurrence,
    check_controlled,
    conical_probe,
    hierarchy_check,
)
from .coding import Crossing, DecodeResult, decode, encode, ray_crossing_sequence
from .errors import (
    AmbiguousConfigurationError,
    AmbiguousCrossingError,
    ConfigurationRejectedError,
    DSLSyntaxError,
    EncodingToleranceError,
    InvalidArgumentError,
    NeedsMorePrefixError,
    NotALimitPointError,
    RenderDepthError,
    SchottkyError,
)
from .group import (
    LETTERS,
    SchottkyGroup,
    build_group,
    enumerate_words,
    is_reduced,
    word_count,
)
from .hyperbolic import (
    Arc,
    BoundaryPoint,
    Geodesic,
    MoebiusMap,
    OrthoCircle,
    apply_boundary,
    apply_circle,
    compose,
    distance_point_to_geodesic,
    geodesics_cross,
    hyperbolic_distance,
)
from .render import RenderScene, render_scene, translate_scene
from .search import (
    ConcentrationTask,
    WitnessReport,
    search_concentration,
    search_controlled_chain,
    search_separation,
)
from .sequences import FamilySpec, SymbolicSequence, parse_family, shift
