# Insert-only witness queries: stashes, primary parts and write-once tables.
# %%
import random

from setix.witness import WitnessStructure

rng = random.Random(5)
ws = WitnessStructure(seed=5)
print("tau", ws.tau_q, "table at", ws.table_at, "medium at", ws.medium_at, "stash cap", ws.stash_cap)

# %% grow one set through every class, watching the stash dumps
ws.add_set("b")
for x in range(40):
    ws.insert("a", x)
    if x % 5 == 4:
        snap = ws.debug_snapshot()
        print(x + 1, ws.size_class("a").value, "anchor", snap["anchor"],
              "stash", len(snap["stash"].get("a", ())), "primary", len(snap["primary"].get("a", ())),
              "dumps", ws.stats["dumps"])

# %% a witness comes from the table when one is written, else from the packed stash
ws.insert("b", 17)
ws.insert("b", 1000)
print("witness", ws.witness("a", "b"))
print("tables", ws.debug_snapshot()["tables"])

# %% many sets: query cost is a handful of probes
for _ in range(3000):
    s = rng.randrange(300)
    ws.add_set(s)
    x = rng.randrange(5000)
    if x not in ws.members(s):
        ws.insert(s, x)
before = ws.stats["query_probes"]
for _ in range(500):
    ws.witness(rng.randrange(300), rng.randrange(300))
print("probes per query", (ws.stats["query_probes"] - before) / 500, "stash queries", ws.stats["stash_queries"])
