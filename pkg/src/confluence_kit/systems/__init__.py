from .base import BlockPartition, LinearSystem
from .borel import BorelColumnSystem
from .confluent import ConfluentFamily
from .okubo import OkuboSystem

__all__ = [
    "BlockPartition",
    "LinearSystem",
    "OkuboSystem",
    "ConfluentFamily",
    "BorelColumnSystem",
]
