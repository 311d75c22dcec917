import os
import tempfile
from pathlib import Path
from unittest.mock import Mock, patch

import requests
from django.conf import settings
from django.test import SimpleTestCase, override_settings

from apps.backends.audit import AuditLog
from apps.backends.clients import translate_batch
from apps.backends.endpoints import BackendEndpoint, api_key_variable
from apps.backends.transport import BackendClient
from apps.core.exceptions import ConfigError, ProtocolError, TransportError

from .fakes import FakeModelSession


def translate_endpoint(**overrides):
    options = {
        "name": "mt",
        "base_url": "http://mt.test",
        "kind": "translate",
        "max_retries": 3,
        "batch_size": 2,
    }
    options.update(overrides)
    return BackendEndpoint(**options)


class TestTranslateTransport(SimpleTestCase):
    def make_client(self, session, **overrides):
        self.sleep = Mock()
        return BackendClient(translate_endpoint(**overrides), session, sleep=self.sleep)

    def test_echo(self):
        client = self.make_client(FakeModelSession())
        self.assertEqual(
            translate_batch(client, ["x", "y"], "ita_Latn", "lld_Latn"), ["x", "y"]
        )

    def test_order_preserved_across_batches_and_threads(self):
        session = FakeModelSession(
            translator=lambda texts, s, t: [f"{text}#{t}" for text in texts]
        )
        texts = [f"frase {i}" for i in range(23)]
        for batch_size, in_flight in ((1, 1), (5, 3), (7, 8), (50, 2)):
            with self.subTest(batch_size=batch_size, in_flight=in_flight):
                client = self.make_client(
                    session, batch_size=batch_size, max_in_flight=in_flight
                )
                result = translate_batch(client, texts, "ita_Latn", "lld_Latn")
                self.assertEqual(result, [f"{text}#lld_Latn" for text in texts])

    def test_short_answer_is_protocol_error(self):
        session = FakeModelSession(translator=lambda texts, s, t: texts[:1])
        with self.assertRaisesMessage(ProtocolError, "items 0..1"):
            translate_batch(self.make_client(session), ["x", "y"], "ita_Latn", "lld_Latn")

    def test_transient_failures_then_success(self):
        clean = translate_batch(
            self.make_client(FakeModelSession()), ["a", "b", "c"], "ita_Latn", "lld_Latn"
        )
        session = FakeModelSession(failures={"/translate": [503, 429]})
        client = self.make_client(session)
        result = translate_batch(client, ["a", "b", "c"], "ita_Latn", "lld_Latn")
        self.assertEqual(result, clean)
        self.assertEqual(self.sleep.call_count, 2)

    def test_only_failed_batch_is_requested_again(self):
        session = FakeModelSession(failures={"/translate": [500]})
        texts = ["a", "b", "c", "d"]
        translate_batch(self.make_client(session), texts, "ita_Latn", "lld_Latn")
        self.assertEqual(len(session.calls), 3)
        self.assertEqual(session.calls[0][1]["texts"], ["a", "b"])
        self.assertEqual(session.calls[1][1]["texts"], ["a", "b"])
        self.assertEqual(session.calls[2][1]["texts"], ["c", "d"])

    def test_connection_errors_are_retried(self):
        session = FakeModelSession(
            failures={"/translate": [requests.ConnectionError("reset")]}
        )
        result = translate_batch(self.make_client(session), ["a"], "ita_Latn", "lld_Latn")
        self.assertEqual(result, ["a"])

    def test_exhausted_retries_name_the_failed_items(self):
        session = FakeModelSession(failures={"/translate": [503] * 10})
        client = self.make_client(session, max_retries=2)
        with self.assertRaises(TransportError) as ctx:
            translate_batch(client, ["a", "b", "c"], "ita_Latn", "lld_Latn")
        self.assertEqual((ctx.exception.start, ctx.exception.stop), (0, 2))
        self.assertIn("items 0..1", str(ctx.exception))
        self.assertEqual(len(session.calls), 3)

    def test_client_error_fails_fast(self):
        session = FakeModelSession(failures={"/translate": [400]})
        with self.assertRaisesMessage(TransportError, "HTTP 400"):
            translate_batch(self.make_client(session), ["a"], "ita_Latn", "lld_Latn")
        self.assertEqual(len(session.calls), 1)
        self.sleep.assert_not_called()

    @override_settings(
        CORPUSFORGE={**settings.CORPUSFORGE, "RETRY_BACKOFF": 1.0, "MAX_BACKOFF": 5.0}
    )
    def test_backoff_doubles_and_is_capped(self):
        client = self.make_client(FakeModelSession())
        delays = [client._backoff(attempt, None) for attempt in range(5)]
        self.assertEqual(delays, [1.0, 2.0, 4.0, 5.0, 5.0])
        self.assertEqual(client._backoff(0, 3.0), 3.0)

    def test_audit_log_keeps_raw_responses(self):
        with tempfile.TemporaryDirectory() as tmp:
            audit = AuditLog(Path(tmp) / "responses.jsonl")
            session = FakeModelSession()
            client = BackendClient(translate_endpoint(), session, audit=audit)
            translate_batch(client, ["a", "b", "c"], "ita_Latn", "lld_Latn")
            lines = audit.path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(len(lines), 2)
        self.assertIn('"translations": ["a", "b"]', lines[0])


class TestBackendEndpoint(SimpleTestCase):
    def test_invariants(self):
        with self.assertRaises(ConfigError):
            translate_endpoint(batch_size=0)
        with self.assertRaises(ConfigError):
            translate_endpoint(max_retries=-1)
        with self.assertRaises(ConfigError):
            translate_endpoint(kind="speech")

    def test_url_per_kind(self):
        self.assertEqual(translate_endpoint().url, "http://mt.test/translate")
        chat = translate_endpoint(kind="chat", base_url="http://llm.test/v1/")
        self.assertEqual(chat.url, "http://llm.test/v1/generate")

    def test_api_key_from_environment(self):
        self.assertEqual(api_key_variable("labse-embed"), "CF_LABSE_EMBED_KEY")
        with patch.dict(os.environ, {"CF_MT_KEY": "s3cret"}):
            endpoint = BackendEndpoint.from_config(
                "mt", {"base_url": "http://mt.test", "kind": "translate"}
            )
        client = BackendClient(endpoint, FakeModelSession())
        self.assertEqual(client._headers()["Authorization"], "Bearer s3cret")
        self.assertNotIn("s3cret", repr(endpoint))

    def test_wrong_kind_rejected(self):
        endpoint = translate_endpoint(kind="embed")
        with self.assertRaisesMessage(ConfigError, "expected translate"):
            translate_batch(endpoint, ["a"], "ita_Latn", "lld_Latn")
