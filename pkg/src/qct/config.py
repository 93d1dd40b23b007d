"""Size caps and search budgets.  All are plain module constants; every
function that uses one also accepts an explicit override argument."""

import os

CARRIER_CAP = 10**6
GAME_NODE_BUDGET = 10**8
HOM_NODE_BUDGET = 5 * 10**7
ENDO_BOUND = 7
AUTO_BOUND = 10
EMBED_BOUND = 8


def game_node_budget():
    """Game-node budget, honouring the QCT_NODE_BUDGET environment variable."""
    raw = os.environ.get("QCT_NODE_BUDGET")
    if raw:
        return int(raw)
    return GAME_NODE_BUDGET
