"""Tree growers; each exposes ``grow_<name>_tree(data, resample, cfg, rng)``."""
from .et import grow_et_tree
from .intf import grow_intf_tree
from .rf import grow_rf_tree
from .rsrf import grow_rsrf_tree

__all__ = ["grow_rf_tree", "grow_et_tree", "grow_intf_tree", "grow_rsrf_tree"]
