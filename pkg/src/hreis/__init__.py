"""Faculty HR executive information system.

Batch-loads personnel CSVs into an embedded warehouse, rolls the records
up into the dashboard distributions, and serves them over a role-gated
JSON API.
"""

__version__ = "0.1.0"
