"""Situation-report generation from dated news corpora.

The pipeline turns a JSONL news corpus into a structured report: N-week
timespans, clustered major-event chapters, strategic-question sections,
and citation-grounded summaries at three detail levels. A deterministic
mock provider makes the whole thing runnable offline, and the evaluation
kit measures edit distance, citation quality, and review distributions.
"""

__version__ = "0.1.0"
