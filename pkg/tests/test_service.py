import pytest
from fastapi.testclient import TestClient

from spa.service import MAX_BODY_BYTES, create_app, example_names


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestCheckEndpoint:
    def test_p43_complete(self, client, p43_path):
        resp = client.post("/api/check", json={"script": p43_path.read_text()})
        assert resp.status_code == 200
        body = resp.json()
        assert body["complete"] is True
        assert body["lemmas"][0]["name"] == "pelletier43"
        statuses = {s["status"] for s in body["lemmas"][0]["steps"]}
        assert statuses == {"ok"}

    def test_step_schema(self, client):
        script = 'lemma t: "P() ==> P()"\nproof\n  assume h: "P()"\n  show "P()" by h\nqed\n'
        body = client.post("/api/check", json={"script": script}).json()
        step = body["lemmas"][0]["steps"][0]
        assert set(step) == {"line", "status", "message", "goals"}
        goal = step["goals"][0]
        assert set(goal) == {"assumptions", "target"}
        assert goal["assumptions"][0] == {"label": "h", "formula": "P"}

    def test_mutated_p43_statuses(self, client, p43_path):
        lines = p43_path.read_text().split("\n")
        idx = next(i for i, l in enumerate(lines)
                   if l.strip() == 'so have "forall z. P(z,x) <=> P(z,y)" by A')
        lines[idx] = lines[idx].replace(" by A", " at once")
        body = client.post("/api/check", json={"script": "\n".join(lines)}).json()
        assert body["complete"] is False
        steps = body["lemmas"][0]["steps"]
        errors = [s for s in steps if s["status"] == "error"]
        assert [e["line"] for e in errors] == [idx + 1]
        after = steps[steps.index(errors[0]) + 1:]
        assert {s["status"] for s in after} == {"unchecked"}

    def test_empty_body_is_400(self, client):
        resp = client.post("/api/check", content=b"")
        assert resp.status_code == 400

    def test_malformed_json_is_400(self, client):
        resp = client.post("/api/check", content=b"{not json",
                           headers={"content-type": "application/json"})
        assert resp.status_code == 400

    def test_wrong_shape_is_400(self, client):
        resp = client.post("/api/check", json={"nope": 1})
        assert resp.status_code == 400

    def test_oversized_body_is_413(self, client):
        big = "x" * (MAX_BODY_BYTES + 10)
        resp = client.post("/api/check", json={"script": big})
        assert resp.status_code == 413

    def test_stateless_byte_identical(self, client, p43_path):
        payload = {"script": p43_path.read_text()}
        a = client.post("/api/check", json=payload).content
        b = client.post("/api/check", json=payload).content
        assert a == b

    def test_parse_error_reported(self, client):
        body = client.post("/api/check", json={"script": "lemma ???"}).json()
        assert body["complete"] is False
        assert body["error"]["line"] == 1

    def test_cors_allows_editor(self, client):
        resp = client.post("/api/check", json={"script": "lemma ???"},
                           headers={"origin": "http://localhost:5173"})
        assert resp.headers.get("access-control-allow-origin") == "*"


class TestExamples:
    def test_listing(self, client):
        resp = client.get("/api/examples")
        assert resp.status_code == 200
        assert resp.json() == ["pelletier34", "pelletier43"]

    def test_fetch_text(self, client, p43_path):
        resp = client.get("/api/examples/pelletier43")
        assert resp.status_code == 200
        assert resp.text == p43_path.read_text()

    def test_unknown_is_404(self, client):
        assert client.get("/api/examples/zzz").status_code == 404

    def test_traversal_rejected(self, client):
        assert client.get("/api/examples/..%2Fkernel").status_code in (404, 422)

    def test_example_names_helper(self):
        assert example_names() == ["pelletier34", "pelletier43"]


class TestShippedExamplesStayInSync:
    def test_repo_copies_match_package_data(self, p43_path, p34_path):
        from importlib import resources
        pkg = resources.files("spa") / "examples"
        assert (pkg / "pelletier43.spa").read_text() == p43_path.read_text()
        assert (pkg / "pelletier34.spa").read_text() == p34_path.read_text()


class TestStaticEditor:
    def test_editor_served_at_root(self, client):
        resp = client.get("/")
        assert resp.status_code == 200
        assert "spa proof editor" in resp.text
        assert 'id="gutter"' in resp.text

    def test_compiled_modules_served(self, client):
        resp = client.get("/js/main.js")
        assert resp.status_code == 200
        assert "CheckScheduler" in resp.text


class TestServe:
    def test_port_resolution(self, monkeypatch):
        from spa.service import DEFAULT_PORT, resolve_port
        monkeypatch.delenv("SPA_PORT", raising=False)
        assert resolve_port() == DEFAULT_PORT == 7423
        monkeypatch.setenv("SPA_PORT", "9100")
        assert resolve_port() == 9100
        assert resolve_port(8001) == 8001

    def test_live_server_round_trip(self, p43_path):
        import json
        import socket
        import threading
        import time
        import urllib.request

        import uvicorn

        from spa.service import create_app

        with socket.socket() as s:
            s.bind(("127.0.0.1", 0))
            port = s.getsockname()[1]
        server = uvicorn.Server(uvicorn.Config(
            create_app(), host="127.0.0.1", port=port, log_level="error"))
        thread = threading.Thread(target=server.run, daemon=True)
        thread.start()
        base = f"http://127.0.0.1:{port}"
        try:
            for _ in range(100):
                try:
                    urllib.request.urlopen(f"{base}/api/examples", timeout=1)
                    break
                except OSError:
                    time.sleep(0.05)
            body = json.dumps({"script": p43_path.read_text()}).encode()
            req = urllib.request.Request(
                f"{base}/api/check", data=body,
                headers={"content-type": "application/json"})
            report = json.load(urllib.request.urlopen(req, timeout=30))
            assert report["complete"] is True
            html = urllib.request.urlopen(base, timeout=5).read().decode()
            assert 'id="editor"' in html
        finally:
            server.should_exit = True
            thread.join(timeout=5)
