"""Drive the HTTP service end to end with a real client.

Boots the API server on a scratch copy of the bundled workspace, then
walks the whole loop a client would: inspect the taxonomies, grow one,
list parts, submit a synthesis request, poll the job, and pull results,
bills of materials, and a posed scene back out.

Run:  python3 demos/drive_the_server.py
"""

import shutil
import socket
import tempfile
import threading
import time
from pathlib import Path

import httpx
import uvicorn

from asmsynth import create_app, toyarm_dir

# Scratch workspace: edits made over HTTP are persisted into the data dir,
# and the packaged copy must stay pristine.
workdir = Path(tempfile.mkdtemp(prefix="asmsynth-demo-")) / "workspace"
shutil.copytree(toyarm_dir(), workdir)

with socket.socket() as s:
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]

server = uvicorn.Server(uvicorn.Config(create_app(workdir), host="127.0.0.1", port=port, log_level="warning"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()

base = f"http://127.0.0.1:{port}"
client = httpx.Client(base_url=base, timeout=10.0)
for _ in range(100):
    try:
        if client.get("/health").status_code == 200:
            break
    except httpx.TransportError:
        time.sleep(0.05)
print(f"server up at {base}")

# --- taxonomy round trip -----------------------------------------------------
doc = client.get("/taxonomies/attributes").json()
print(f"attributes: {sorted(doc['nodes'])}")
doc["nodes"].append("Waterproof")
doc["edges"].append(["Waterproof", "Capability"])
r = client.put("/taxonomies/attributes", json=doc)
assert r.status_code == 200, r.text
print("added attribute Waterproof under Capability")

# --- catalog -----------------------------------------------------------------
parts = client.get("/parts").json()
print(f"parts on the server: {len(parts)}")

# --- synthesis job -----------------------------------------------------------
request = {
    "target": {"formats": [], "parts": ["Arm"], "attributes": []},
    "propagated": {"formats": [], "parts": [], "attributes": ["SelfRotate"]},
    "sizes": None,
    "limit": 8,
}
r = client.post("/requests", json=request)
assert r.status_code == 202, r.text
job_id = r.json()["jobId"]
print(f"submitted job {job_id}")

while True:
    job = client.get(f"/jobs/{job_id}").json()
    if job["state"] in ("done", "failed"):
        break
    time.sleep(0.05)
assert job["state"] == "done", job
print(f"job finished with {job['resultCount']} results")

# --- results -----------------------------------------------------------------
listing = client.get(f"/jobs/{job_id}/results", params={"limit": 3}).json()
for item in listing["items"]:
    bom = client.get(f"/jobs/{job_id}/results/{item['index']}/bom").json()
    rows = ", ".join(f"{row['quantity']}x {row['partId']}" for row in bom["rows"])
    print(f"  result {item['index']}: {item['partCount']} parts, {item['dof']} dof  [{rows}]")

# A posed scene for result 0 with both joints at 45 degrees.
scene = client.get(f"/jobs/{job_id}/results/0/scene", params={"angles": "0.7854,0.7854"}).json()
print(f"scene for result 0: {len(scene)} placements, "
      f"root at {scene[0]['origin']}, tip at {[round(v, 2) for v in scene[-1]['origin']]}")

client.close()
server.should_exit = True
thread.join(timeout=5)
print("server stopped")
