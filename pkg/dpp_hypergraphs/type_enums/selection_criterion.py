from dpp_hypergraphs.enum_extension import ExtendedEnum


class SelectionCriterion(ExtendedEnum):
    """Information criterion used to pick the latent dimension."""

    AIC = "aic"
    BIC = "bic"
