"""Worst-case minimum cost flows under interval capacities."""

from .model import Arc, Flow, Instance, IntervalCapacity, Scenario

__all__ = ["Arc", "Flow", "Instance", "IntervalCapacity", "Scenario"]
__version__ = "0.1.0"
