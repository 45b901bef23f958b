"""
test_api.py
----------
Checks the API server end to end through FastAPI's test client.
Run with pytest, or directly for a printed walkthrough.
"""

import os

from fastapi.testclient import TestClient

import api_server
from api_server import app
from config import LOG_FILE

client = TestClient(app)

DOCUMENTS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "documents")


def test_health_check():
    """Test the health check endpoint"""
    print("🔍 Testing health check endpoint...")
    response = client.get("/")
    assert response.status_code == 200
    print(f"✅ Health check passed: {response.json()['message']}")


def test_get_config():
    """Test the configuration endpoint"""
    print("🔍 Testing configuration endpoint...")
    response = client.get("/api/v1/config")
    assert response.status_code == 200
    data = response.json()
    assert "z4" in data["rings"]
    assert "z2" in data["modules"]["z4"]
    assert "rep:Q" in data["modules"]["a2f2"]
    print(f"✅ Config retrieved: {sorted(data['rings'])}")


def test_eval():
    print("🔍 Testing formula evaluation...")
    body = {"ring": "z4", "formula": "E y . x = y*2", "module": "regular"}
    response = client.post("/api/v1/eval", json=body)
    assert response.status_code == 200
    data = response.json()
    assert data["command"] == "eval"
    assert data["decision"] == 2
    assert data["witnesses"][0]["elements"] == ["(0:R)", "(2:R)"]
    print(f"✅ Evaluated: {data['decision']}")


def test_dual_and_implication():
    response = client.post("/api/v1/dual", json={"ring": "z4", "formula": "E y . x = y*2"})
    assert response.status_code == 200
    assert response.json()["witnesses"][0]["dual_side"] == "left"

    body = {"ring": "z4", "premise": "x*2 = 0", "conclusion": "E y . x = y*2"}
    response = client.post("/api/v1/implies", json=body)
    assert response.json()["decision"] == "no"
    assert response.json()["witnesses"][0]["counterexample_module_order"] == 2


def test_herzog():
    body = {"ring": "z4", "right_module": "z2", "left_module": "regular", "r": "1", "s": "2"}
    response = client.post("/api/v1/herzog", json=body)
    assert response.status_code == 200
    assert response.json()["decision"] == "vanishes"


def test_bad_input_is_a_400():
    print("🔍 Testing error handling...")
    response = client.post("/api/v1/eval", json={"ring": "z4", "formula": "x * = 0"})
    assert response.status_code == 400
    data = response.json()
    assert data["success"] is False
    assert data["error_type"] == "DslSyntaxError"

    response = client.post("/api/v1/eval", json={"ring": "z5", "formula": "x = 0"})
    assert response.status_code == 400
    assert response.json()["error_type"] == "UnknownFixture"
    print("✅ Errors reported as 400")


def test_demo_eps():
    print("🔍 Testing the five-sort table...")
    response = client.get("/api/v1/demo-eps")
    assert response.status_code == 200
    assert response.json()["decision"] == [8, 4, 2, 4, 2]
    response = client.get("/api/v1/demo-eps", params={"field": "f3"})
    assert response.json()["decision"] == [27, 9, 3, 9, 3]
    response = client.get("/api/v1/demo-4-3")
    assert response.status_code == 200
    assert response.json()["decision"] == [8, 4, 2, 4, 2]
    print("✅ Five sorts match")


def test_unexpected_failure_is_logged(monkeypatch):
    """Test that a 500 names the exception in the activity log"""
    def broken(*args, **kwargs):
        raise RuntimeError("matrix table went missing")

    monkeypatch.setattr(api_server, "run_eval", broken)
    response = TestClient(app, raise_server_exceptions=False).post("/api/v1/eval", json={"ring": "z4", "formula": "x = 0"})
    assert response.status_code == 500
    assert response.json()["error_type"] == "InternalServerError"
    with open(LOG_FILE, encoding="utf-8") as f:
        assert "RuntimeError: matrix table went missing" in f.read()


def test_validate_upload():
    print("🔍 Testing ringoid upload...")
    with open(os.path.join(DOCUMENTS, "a2f2_ringoid.json"), "rb") as f:
        response = client.post("/api/v1/ringoids/validate", files={"document": ("a2f2_ringoid.json", f, "application/json")})
    assert response.status_code == 200
    witness = response.json()["witnesses"][0]
    assert witness["objects"] == ["P", "Q"]

    with open(os.path.join(DOCUMENTS, "broken_ringoid.json"), "rb") as f:
        response = client.post("/api/v1/ringoids/validate", files={"document": ("broken_ringoid.json", f, "application/json")})
    assert response.status_code == 400

    response = client.post("/api/v1/ringoids/validate", files={"document": ("notes.txt", b"{}", "text/plain")})
    assert response.status_code == 400
    print("✅ Upload validation works")


def main():
    """Run all tests"""
    print("🚀 Starting API tests...")
    print("=" * 50)
    for test in (test_health_check, test_get_config, test_eval, test_dual_and_implication,
                 test_herzog, test_bad_input_is_a_400, test_demo_eps, test_validate_upload):
        test()
        print()
    print("=" * 50)
    print("🎉 All tests passed! API is working correctly.")


if __name__ == "__main__":
    main()
