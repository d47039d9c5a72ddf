import json

import pytest

from crowdsent.corpus import CorpusStore, load_corpus, parse_timestamp
from crowdsent.errors import ParseError, UsageError

from helpers import build_store, make_tweet, ts


def write_jsonl(path, rows):
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")


TWEET_ROWS = [
    {"id": "t1", "user_id": "u1", "text": "hello", "created_at": "2014-12-07T10:00:00Z",
     "lang": "en", "is_retweet": False},
    {"id": "t2", "user_id": "u1", "text": "again", "created_at": "2014-12-08T10:00:00Z",
     "lang": "en", "is_retweet": False},
    {"id": "t3", "user_id": "u2", "text": "other", "created_at": "2014-12-05T10:00:00Z",
     "lang": None, "is_retweet": True},
]


class TestIngest:
    def test_empty_file_ingests_zero(self, tmp_path):
        path = tmp_path / "tweets.jsonl"
        path.write_text("", encoding="utf-8")
        assert CorpusStore().ingest_jsonl(path, "tweets") == 0

    def test_count_equals_lines(self, tmp_path):
        path = tmp_path / "tweets.jsonl"
        write_jsonl(path, TWEET_ROWS)
        store = CorpusStore()
        assert store.ingest_jsonl(path, "tweets") == 3
        assert set(store.tweets) == {"t1", "t2", "t3"}

    def test_malformed_line_rejects_whole_file(self, tmp_path):
        path = tmp_path / "tweets.jsonl"
        lines = [json.dumps(r) for r in TWEET_ROWS]
        lines.insert(2, "{not json")
        lines.append(json.dumps({"id": "t9", "user_id": "u9", "text": "x",
                                 "created_at": "2014-01-01T00:00:00Z"}))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        store = CorpusStore()
        with pytest.raises(ParseError) as err:
            store.ingest_jsonl(path, "tweets")
        assert err.value.line_no == 3
        assert store.tweets == {}  # nothing committed

    def test_unknown_kind_is_usage_error(self, tmp_path):
        path = tmp_path / "x.jsonl"
        path.write_text("", encoding="utf-8")
        with pytest.raises(UsageError):
            CorpusStore().ingest_jsonl(path, "gadgets")

    def test_unreadable_file_is_io_error(self, tmp_path):
        with pytest.raises(OSError):
            CorpusStore().ingest_jsonl(tmp_path / "absent.jsonl", "tweets")

    def test_duplicate_id_overwrites_with_warning(self, tmp_path, caplog):
        path = tmp_path / "tweets.jsonl"
        rows = [TWEET_ROWS[0], dict(TWEET_ROWS[0], text="replacement")]
        write_jsonl(path, rows)
        store = CorpusStore()
        with caplog.at_level("WARNING"):
            assert store.ingest_jsonl(path, "tweets") == 2
        assert store.tweets["t1"].text == "replacement"
        assert "duplicate" in caplog.text

    def test_overlong_text_warns_but_keeps(self, caplog):
        store = CorpusStore(max_text_len=10)
        with caplog.at_level("WARNING"):
            store.add(make_tweet("t1", "u1", "x" * 40, ts(1)))
        assert store.tweets["t1"].text == "x" * 40
        assert "exceeds max" in caplog.text


class TestTimestamps:
    def test_z_suffix_and_offset_agree(self):
        assert parse_timestamp("2014-12-07T10:00:00Z") == parse_timestamp(
            "2014-12-07T10:00:00+00:00"
        )

    def test_bad_timestamp_rejected(self):
        with pytest.raises(ValueError):
            parse_timestamp("last tuesday")


class TestWindowQueries:
    @pytest.fixture
    def store(self):
        return build_store(tweets=[
            make_tweet("a", "u1", "one", ts(5, month=12)),
            make_tweet("b", "u2", "two", ts(7, month=12)),
            make_tweet("c", "u1", "three", ts(10, month=12)),
            make_tweet("d", "u3", "four", ts(20, month=12)),
        ])

    def test_empty_window(self, store):
        assert store.tweets_in_window(ts(1, month=1), ts(2, month=1)) == []

    def test_full_span_returns_all(self, store):
        got = store.tweets_in_window(ts(1, month=1), ts(31, month=12))
        assert [t.id for t in got] == ["a", "b", "c", "d"]

    def test_window_brute_force_oracle(self, store):
        start, end = ts(6, month=12), ts(14, month=12)
        expected = sorted(
            (t for t in store.tweets.values() if start <= t.created_at <= end),
            key=lambda t: (t.created_at, t.id),
        )
        assert store.tweets_in_window(start, end) == expected
        assert [t.id for t in expected] == ["b", "c"]

    def test_window_bounds_inclusive(self, store):
        got = store.tweets_in_window(ts(5, month=12), ts(10, month=12))
        assert [t.id for t in got] == ["a", "b", "c"]

    def test_reversed_window_rejected(self, store):
        with pytest.raises(UsageError):
            store.tweets_in_window(ts(2, month=12), ts(1, month=12))

    def test_partition_property(self, store):
        from datetime import timedelta

        a, c = ts(1, month=1), ts(31, month=12)
        b = ts(8, month=12)
        left = store.tweets_in_window(a, b)
        right = store.tweets_in_window(b + timedelta(seconds=1), c)
        assert [t.id for t in left] + [t.id for t in right] == [
            t.id for t in store.tweets_in_window(a, c)
        ]


class TestByUser:
    def test_unknown_user_empty(self):
        assert build_store().tweets_by_user("ghost") == []

    def test_newest_first_linear_scan_oracle(self):
        store = build_store(tweets=[
            make_tweet("a", "u1", "1", ts(1)),
            make_tweet("b", "u1", "2", ts(3)),
            make_tweet("c", "u1", "3", ts(2)),
        ])
        expected = sorted(
            (t for t in store.tweets.values() if t.user_id == "u1"),
            key=lambda t: (t.created_at, t.id),
            reverse=True,
        )
        assert store.tweets_by_user("u1") == expected
        assert [t.id for t in expected] == ["b", "c", "a"]

    def test_interleaved_users_only_own(self):
        store = build_store(tweets=[
            make_tweet("a", "u1", "1", ts(1)),
            make_tweet("b", "u2", "2", ts(2)),
            make_tweet("c", "u1", "3", ts(3)),
        ])
        assert [t.id for t in store.tweets_by_user("u1")] == ["c", "a"]

    def test_per_user_counts_sum_to_total(self):
        store = build_store(tweets=[
            make_tweet(f"t{i}", f"u{i % 3}", "x", ts(1 + i % 20)) for i in range(30)
        ])
        total = sum(len(store.tweets_by_user(f"u{k}")) for k in range(3))
        assert total == len(store.tweets)


class TestRoundTrip:
    def test_export_then_ingest_identical(self, tmp_path, e2e_dir):
        store = load_corpus(
            e2e_dir / "users.jsonl", e2e_dir / "lists.jsonl", e2e_dir / "tweets.jsonl"
        )
        for kind in ("users", "lists", "tweets"):
            store.export_jsonl(tmp_path / f"{kind}.jsonl", kind)
        copy = load_corpus(
            tmp_path / "users.jsonl", tmp_path / "lists.jsonl", tmp_path / "tweets.jsonl"
        )
        assert copy.users == store.users
        assert copy.lists == store.lists
        assert copy.tweets == store.tweets

    def test_field_names_bit_exact(self):
        tweet = make_tweet("t1", "u1", "hi", ts(1), lang="en")
        assert set(tweet.to_json()) == {
            "id", "user_id", "text", "created_at", "lang", "is_retweet",
        }
        assert tweet.to_json()["created_at"].endswith("Z")
