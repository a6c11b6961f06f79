"""Measure language bias of sentiment classifiers on balanced English/French review corpora."""

__version__ = "0.1.0"
