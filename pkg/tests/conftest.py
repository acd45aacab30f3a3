# These imports are required to properly set up pytest fixtures.
from tests.fixtures.config_fixtures import *  # noqa: F401, F403
from tests.fixtures.hypergraph_fixtures import *  # noqa: F401, F403
