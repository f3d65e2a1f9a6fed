"""Adaptive semi-structured interviewing engine.

The engine conducts multi-turn interviews against a topic guide, balancing
guide coverage, discovery of emergent themes, and interviewee burden. It
ships with a simulated-interviewee benchmark harness, baseline interviewer
strategies, a post-hoc evaluation suite, and a session HTTP API.
"""

__version__ = "0.1.0"
