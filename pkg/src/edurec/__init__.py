"""Quiz-driven course recommendation toolkit.

Subpackages and modules:
  dataset      - data schema, synthetic generation, CSV I/O, hold-out splits
  classifiers  - from-scratch decision tree, random forest and naive Bayes
  evaluation   - confusion matrices, accuracy / F-measure, comparison reports
  recommend    - question banks, quiz sessions, scoring and recommendations
  store        - append-only session event log with replay
  service      - HTTP JSON API over the quiz -> recommendation workflow
  cli          - command-line entry point for every workflow
"""

__version__ = "0.1.0"
