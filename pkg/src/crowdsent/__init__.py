"""crowdsent: community-focused microblog crawling, event filtering and
rule-based sentiment analytics.

Subsystems:
    corpus      JSONL-backed corpus of users, lists and tweets
    gateway     rate-limited source access (fixture and HTTP backends)
    mock_api    bundled mock HTTP server for the wire protocol
    snowball    community identification over the user/list graph
    events      event keyword matching and frequency-based expansion
    normalize   tweet text clean-up
    sentiment   the two rule-based analyzers (compiled kernel optional)
    metrics     precision/recall, distributions, participation, clusters
    cli         the `pipeline` command
    service     the review HTTP service
"""

__version__ = "0.1.0"
