import json
import signal
import socket
import subprocess
import sys
import time
import urllib.request

import pytest
from fastapi.testclient import TestClient

from sentalign.corpus import save_annotations, save_corpus, validate_annotation_file
from sentalign.service import create_app
from sentalign.synthetic import SyntheticConfig, generate_corpus


@pytest.fixture()
def service_files(tmp_path):
    pairs, records = generate_corpus(SyntheticConfig(n_pairs=3, seed=7))
    corpus_path = tmp_path / "corpus.jsonl"
    save_corpus(pairs, corpus_path)
    predictions_path = tmp_path / "predictions.jsonl"
    save_annotations(records[:4], predictions_path)
    state_path = tmp_path / "state.jsonl"
    return corpus_path, predictions_path, state_path, pairs


def make_client(corpus_path, predictions_path, state_path):
    app = create_app(corpus_path, state_path, predictions_path)
    return TestClient(app)


class TestApi:
    def test_list_pairs_contract(self, service_files):
        corpus_path, predictions_path, state_path, pairs = service_files
        client = make_client(corpus_path, predictions_path, state_path)
        body = client.get("/api/pairs").json()
        assert len(body) == len(pairs)
        for row in body:
            assert set(row) == {"pair_id", "simple_doc_id",
                                "labeled_count", "total_candidates"}
            assert row["labeled_count"] == 0
            assert row["total_candidates"] >= 1

    def test_pair_detail_includes_documents_and_candidates(self, service_files):
        corpus_path, predictions_path, state_path, pairs = service_files
        client = make_client(corpus_path, predictions_path, state_path)
        body = client.get(f"/api/pairs/{pairs[0].pair_id}").json()
        assert body["pair_id"] == pairs[0].pair_id
        assert body["simple"]["paragraphs"]
        assert body["candidates"]
        first = body["candidates"][0]
        assert {"simple_sent", "complex_sent", "similarity",
                "predicted_label", "human_label"} <= set(first)

    def test_unknown_pair_404(self, service_files):
        corpus_path, predictions_path, state_path, _ = service_files
        client = make_client(corpus_path, predictions_path, state_path)
        assert client.get("/api/pairs/zzz").status_code == 404

    def test_post_label_read_your_writes(self, service_files):
        corpus_path, predictions_path, state_path, pairs = service_files
        client = make_client(corpus_path, predictions_path, state_path)
        pair_id = pairs[0].pair_id
        resp = client.post(f"/api/pairs/{pair_id}/labels", json={
            "simple_sent": 0, "complex_sent": 0, "label": "partial"})
        assert resp.status_code == 200
        stored = resp.json()
        assert stored["source"] == "human" and stored["label"] == "partial"
        detail = client.get(f"/api/pairs/{pair_id}").json()
        found = [c for c in detail["candidates"]
                 if c["simple_sent"] == 0 and c["complex_sent"] == 0]
        assert found and found[0]["human_label"] == "partial"

    def test_bad_label_400(self, service_files):
        corpus_path, predictions_path, state_path, pairs = service_files
        client = make_client(corpus_path, predictions_path, state_path)
        resp = client.post(f"/api/pairs/{pairs[0].pair_id}/labels", json={
            "simple_sent": 0, "complex_sent": 0, "label": "banana"})
        assert resp.status_code == 400

    def test_out_of_range_index_400(self, service_files):
        corpus_path, predictions_path, state_path, pairs = service_files
        client = make_client(corpus_path, predictions_path, state_path)
        resp = client.post(f"/api/pairs/{pairs[0].pair_id}/labels", json={
            "simple_sent": 9999, "complex_sent": 0, "label": "aligned"})
        assert resp.status_code == 400

    def test_restart_preserves_labels(self, service_files):
        corpus_path, predictions_path, state_path, pairs = service_files
        client = make_client(corpus_path, predictions_path, state_path)
        pair_id = pairs[1].pair_id
        client.post(f"/api/pairs/{pair_id}/labels", json={
            "simple_sent": 1, "complex_sent": 1, "label": "not_aligned"})
        reborn = make_client(corpus_path, predictions_path, state_path)
        detail = reborn.get(f"/api/pairs/{pair_id}").json()
        found = [c for c in detail["candidates"]
                 if c["simple_sent"] == 1 and c["complex_sent"] == 1]
        assert found and found[0]["human_label"] == "not_aligned"

    def test_export_is_valid_annotation_file(self, service_files, tmp_path):
        corpus_path, predictions_path, state_path, pairs = service_files
        client = make_client(corpus_path, predictions_path, state_path)
        client.post(f"/api/pairs/{pairs[0].pair_id}/labels", json={
            "simple_sent": 0, "complex_sent": 1, "label": "aligned"})
        text = client.get("/api/export").text
        export_path = tmp_path / "export.jsonl"
        export_path.write_text(text)
        assert validate_annotation_file(export_path) >= 1
        assert '"source": "human"' in text

    def test_human_label_overrides_prediction_on_export(self, service_files, tmp_path):
        corpus_path, predictions_path, state_path, pairs = service_files
        client = make_client(corpus_path, predictions_path, state_path)
        # Relabel a predicted candidate; merged export must keep the human one.
        detail = client.get(f"/api/pairs/{pairs[0].pair_id}").json()
        predicted = [c for c in detail["candidates"] if c["predicted_label"]]
        if not predicted:
            pytest.skip("no predicted candidate in fixture")
        target = predicted[0]
        client.post(f"/api/pairs/{pairs[0].pair_id}/labels", json={
            "simple_sent": target["simple_sent"],
            "complex_sent": target["complex_sent"],
            "label": "not_aligned"})
        export_path = tmp_path / "export.jsonl"
        export_path.write_text(client.get("/api/export").text)
        from sentalign.corpus import load_annotations, merge_annotations
        merged = merge_annotations(load_annotations(export_path))
        key = (pairs[0].pair_id, target["simple_sent"], target["complex_sent"])
        assert merged[key].label.value == "not_aligned"
        assert merged[key].source.value == "human"


def free_port():
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def wait_for(url, timeout=15.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        try:
            with urllib.request.urlopen(url, timeout=1) as resp:
                return resp.read()
        except Exception:
            time.sleep(0.2)
    raise TimeoutError(f"service at {url} did not come up")


class TestKillAndRestart:
    def test_acknowledged_write_survives_sigkill(self, service_files):
        corpus_path, predictions_path, state_path, pairs = service_files
        port = free_port()
        args = [sys.executable, "-m", "sentalign.cli", "serve",
                "--corpus", str(corpus_path), "--predictions", str(predictions_path),
                "--state", str(state_path), "--port", str(port)]
        proc = subprocess.Popen(args, stdout=subprocess.DEVNULL,
                                stderr=subprocess.DEVNULL)
        try:
            wait_for(f"http://127.0.0.1:{port}/api/pairs")
            body = json.dumps({"simple_sent": 0, "complex_sent": 0,
                               "label": "aligned"}).encode()
            req = urllib.request.Request(
                f"http://127.0.0.1:{port}/api/pairs/{pairs[0].pair_id}/labels",
                data=body, headers={"Content-Type": "application/json"})
            with urllib.request.urlopen(req, timeout=5) as resp:
                assert resp.status == 200
        finally:
            proc.send_signal(signal.SIGKILL)
            proc.wait(timeout=10)
        # The acknowledged record must be durable on disk after a hard kill.
        assert validate_annotation_file(state_path) == 1
        client = make_client(corpus_path, predictions_path, state_path)
        detail = client.get(f"/api/pairs/{pairs[0].pair_id}").json()
        found = [c for c in detail["candidates"]
                 if c["simple_sent"] == 0 and c["complex_sent"] == 0]
        assert found and found[0]["human_label"] == "aligned"
