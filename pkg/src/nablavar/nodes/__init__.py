"""Graph node functions.

Each node is defined in its own module for clarity.
"""

from nablavar.nodes.prepare import prepare_node
from nablavar.nodes.solve import brute_node, direct_node, newton_node
from nablavar.nodes.verify import verify_node

__all__ = ["brute_node", "direct_node", "newton_node", "prepare_node", "verify_node"]
