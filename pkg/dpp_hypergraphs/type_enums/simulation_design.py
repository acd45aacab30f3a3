from dpp_hypergraphs.enum_extension import ExtendedEnum


class SimulationDesign(ExtendedEnum):
    """Synthetic designs for latent directions.

    SIM1 draws directions uniformly on the sphere; SIM2 draws them from von Mises-Fisher clusters around orthogonal
    mean directions and additionally scores node clustering.
    """

    SIM1 = "sim1"
    SIM2 = "sim2"
