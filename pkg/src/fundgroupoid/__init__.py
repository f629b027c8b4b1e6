"""Fundamental-groupoid representations on punctured planes.

Modules
-------
groupoid
    Finite groupoids from explicit composition tables and axiom checks.
homotopy
    Polylines, angle lifts, winding numbers and homotopy classes.
representation
    Mesh-based U(1) groupoid representations and gauge transformations.
propagator
    Exhaustive lattice-walk path integral split by winding sector.
cli
    The ``fundgroupoid`` command.
"""
from .errors import (
    BudgetExceeded,
    ClearanceError,
    EmptySectorError,
    EndpointMismatchError,
    FundGroupoidError,
    MeshLookupError,
    NotClosedError,
    UndefinedCompositionError,
    UnknownElementError,
    WeakAxiomViolation,
)
from .homotopy import (
    HomotopyClass,
    Polyline,
    PuncturedPlane,
    angle_lift,
    concat,
    half_circle,
    homotopic,
    homotopy_class,
    invert_point,
    reverse,
    winding_number,
)
from .kernels import BACKEND
from .representation import (
    GroupoidRep,
    GroupRepZ,
    Mesh,
    MeshWeights,
    chi,
    class_transport,
    compatible,
    gauge_transform,
    inversion_defect,
    ldw_rep,
    loop_projection,
    rebase,
    spiral_mesh,
    symmetric_rep,
    symmetric_weights,
)

__version__ = "0.1.0"
