"""Multilevel MindMap engine.

Turns pre-parsed sentence trees (SEPT documents) into a meaning graph of
entity/action frames, summarizes it recursively against a concept ontology,
attaches images to visual concepts, and lays every level out with a spring
model. Exposed as a library, a CLI and an HTTP service.
"""

__version__ = "0.1.0"
