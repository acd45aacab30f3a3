from dpp_hypergraphs.type_enums.clustering_method import ClusteringMethod  # noqa: F401
from dpp_hypergraphs.type_enums.selection_criterion import (  # noqa: F401
    SelectionCriterion,
)
from dpp_hypergraphs.type_enums.simulation_design import SimulationDesign  # noqa: F401
