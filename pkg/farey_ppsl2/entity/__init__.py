from .entity_group import ExtendedRational, GroupElement, GroupWord, OrientedEdge
from .entity_field import Sl2Element, PiecewiseField, HyperfanCombination, BasisExpansion, OneFormTruncation
from .entity_geometry import DecoratedPoint, Framing, RationalMatrix, TriangulatedPolygon
from .entity_geometry import Tessellation, TessellationMap, DecoratedTessellationTruncation
from .entity_series import FourierSeries, QSeries, GroupPoint, KKResult
from .entity_config import ConfigError, RunConfig, mask
from .entity_report import Status, CaseResult, SuiteReport
