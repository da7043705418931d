"""Exact element-free probability: multisets, partitions, pmn and law checks."""

__version__ = "0.1.0"

from .dist import FinDist, SubDist, bind, dirac, iid, pushforward, uniform  # noqa: E402
from .elementfree import FRESH, ElementFree, FreshBase, FreshLabel, MixtureMeasure, flatten, mc_dist, ord_  # noqa: E402
from .multiset import Multiset  # noqa: E402
from .partition import IntPartition, enumerate_partitions, part_coeff  # noqa: E402
from .sampling import (  # noqa: E402
    CertificationError,
    WeightStream,
    base_dist,
    base_partition,
    dd,
    mn,
    pdd,
    pmn,
    pmn_certified,
)

__all__ = [
    "FRESH", "CertificationError", "ElementFree", "FinDist", "FreshBase", "FreshLabel",
    "IntPartition", "MixtureMeasure", "Multiset", "SubDist", "WeightStream",
    "base_dist", "base_partition", "bind", "dd", "dirac", "enumerate_partitions",
    "flatten", "iid", "mc_dist", "mn", "ord_", "part_coeff", "pdd", "pmn",
    "pmn_certified", "pushforward", "uniform",
]
