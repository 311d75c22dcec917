from unittest.mock import Mock

from django.core.cache import cache
from django.test import SimpleTestCase, override_settings
from rest_framework import serializers

from apps.core.cache_utils import redis_cached
from apps.core.exceptions import (
    AlignmentError,
    ConfigError,
    StageError,
    TransportError,
)
from apps.core.serializers import StrictSerializer, flatten_errors


class PairSerializer(StrictSerializer):
    src = serializers.CharField()
    tgt = serializers.CharField()


class TestSerializers(SimpleTestCase):
    def test_unknown_keys_rejected(self):
        serializer = PairSerializer(data={"src": "a", "tgt": "b", "lang": "lld"})
        self.assertFalse(serializer.is_valid())
        self.assertEqual(
            flatten_errors(serializer.errors), "unexpected field(s) lang"
        )

    def test_nested_errors_flattened(self):
        detail = {
            "endpoints": {"mt": {"kind": ["not a valid choice"]}},
            "seed": ["bad"],
        }
        self.assertEqual(
            flatten_errors(detail), "endpoints.mt.kind: not a valid choice; seed: bad"
        )


class TestExceptions(SimpleTestCase):
    def test_exit_codes(self):
        self.assertEqual(ConfigError("x").exit_code, 1)
        self.assertEqual(TransportError("x").exit_code, 2)
        self.assertEqual(AlignmentError("x").exit_code, 3)

    def test_stage_error_takes_exit_code_of_cause(self):
        error = StageError("translate", TransportError("down", 0, 16), partial=[1])
        self.assertEqual(error.exit_code, 2)
        self.assertEqual(str(error), "stage 'translate' failed: down (items 0..15)")
        self.assertEqual(error.partial, [1])

    def test_alignment_error_previews_ids(self):
        error = AlignmentError("unmatched", [f"{n:02d}" for n in range(25)])
        self.assertIn("00, 01", str(error))
        self.assertTrue(str(error).endswith("19 (+5 more)"))
        self.assertEqual(len(error.ids), 25)


class TestRedisCached(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def test_cached_until_disabled(self):
        compute = Mock(return_value=[1.0, 2.0])

        @redis_cached(ttl_setting="CACHE_TTL_FOR_TEST", key_func=lambda client, x: x)
        def fetch(client, x):
            return compute(x)

        with override_settings(CORPUSFORGE={"CACHE_TTL_FOR_TEST": 30}):
            self.assertEqual(fetch(object(), "a"), [1.0, 2.0])
            self.assertEqual(fetch(object(), "a"), [1.0, 2.0])
            self.assertEqual(compute.call_count, 1)
            fetch(object(), "b")
            self.assertEqual(compute.call_count, 2)

        with override_settings(CORPUSFORGE={"CACHE_TTL_FOR_TEST": 0}):
            fetch(object(), "a")
        self.assertEqual(compute.call_count, 3)

    def test_evict_drops_one_entry(self):
        compute = Mock(side_effect=lambda x: [x])

        @redis_cached(ttl_setting="CACHE_TTL_FOR_TEST", key_func=lambda client, x: x)
        def fetch(client, x):
            return compute(x)

        with override_settings(CORPUSFORGE={"CACHE_TTL_FOR_TEST": 30}):
            fetch(object(), "a")
            fetch(object(), "b")
            fetch.evict(object(), "a")
            fetch(object(), "a")
            fetch(object(), "b")
        calls = [c.args for c in compute.call_args_list]
        self.assertEqual(calls, [("a",), ("b",), ("a",)])
