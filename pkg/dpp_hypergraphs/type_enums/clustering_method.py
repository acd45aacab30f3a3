from dpp_hypergraphs.enum_extension import ExtendedEnum


class ClusteringMethod(ExtendedEnum):
    """Node clustering methods: line k-means on latent directions, or spectral baselines on the clique expansion."""

    LINE_KMEANS = "line_kmeans"
    NSC = "nsc"
    SCORE = "score"

    @property
    def needs_edges(self) -> bool:
        """Whether the method works on the observed hyperedges rather than on a fitted model."""
        return self is not ClusteringMethod.LINE_KMEANS
