"""Bug triage by design-flaw prediction: label bug fixes by the code smells
they introduced, then learn to predict that label from the report text."""

__version__ = "0.1.0"
