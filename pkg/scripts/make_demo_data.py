#!/usr/bin/env python3
"""Generate a small synthetic multi-platform dataset plus a ready run config.

Writes posts.jsonl and run.cfg. Most accounts post inside one narrative
community (one hurricane each); a couple of relay accounts repost from both,
so the user graph contains genuine cut vertices for the bridge detector to
find. Run the pipeline with:

    bridgenet run --config demo/run.cfg --out demo/run
"""

import argparse
import json
import random
from pathlib import Path

NARRATIVES = {
    "helene": [
        "hurricane helene relief supplies arriving asheville shelters volunteers needed",
        "donation drive for helene victims water food blankets drop off points",
        "helene flooding destroyed roads western carolina rescue teams deployed",
    ],
    "milton": [
        "hurricane milton evacuation orders tampa bay storm surge warning",
        "milton landfall florida power outages millions without electricity",
        "gas shortage evacuation routes milton please leave early",
    ],
}
HELENE_USERS = [
    "carolina_relief", "AshevilleMom", "WNCWeatherNerd", "firstresponder_joe",
    "BlueRidgeNews", "mountain_pastor",
]
MILTON_USERS = [
    "TampaBayAnchor", "FloridaManNews", "GulfCoastGal", "xx_19283746_xx",
    "stormchaser_fl", "EvacRouteBot99",
]
RELAY_USERS = ["hurricane_tracker", "NationalStormDesk"]
PLATFORM_MIX = ["X"] * 6 + ["YouTube"] * 2 + ["Reddit"] * 2


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo", help="output directory")
    parser.add_argument("--posts", type=int, default=120)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    for i in range(args.posts):
        if i % 15 == 14:
            # relay account reposting from both communities (alternating);
            # its posts are the only similarity links between the user groups
            user = RELAY_USERS[0]
            platform = "X"
            event = "helene" if (i // 15) % 2 == 0 else "milton"
            text = f"RT @{rng.choice(HELENE_USERS + MILTON_USERS)}: {rng.choice(NARRATIVES[event])}"
        else:
            event = "helene" if i % 2 == 0 else "milton"
            user = rng.choice(HELENE_USERS if event == "helene" else MILTON_USERS)
            platform = rng.choice(PLATFORM_MIX)
            text = rng.choice(NARRATIVES[event]) + f" update{rng.randrange(3)}"
            if rng.random() < 0.25:
                text = f"{text} #{event}"
        rows.append(
            {
                "platform": platform,
                "post_id": f"p{i}",
                "user_id": user.lower(),
                "username": user,
                "text": text,
                "event": event,
                "timestamp": 1727200000 + i * 60,
            }
        )

    posts_path = out / "posts.jsonl"
    with posts_path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")

    cfg_path = out / "run.cfg"
    cfg_path.write_text(
        "# demo pipeline configuration\n"
        f"input = {posts_path}\n"
        "theta = 0.8\n"
        "seed = 7\n"
        "min_cluster_size = 5\n"
        "lda_topics = 3\n"
        "lda_iters = 120\n"
        "lda_min_count = 2\n"
        "bridge_mode = exact\n",
        encoding="utf-8",
    )
    print(f"wrote {len(rows)} posts -> {posts_path}")
    print(f"wrote config -> {cfg_path}")
    print(f"next: bridgenet run --config {cfg_path} --out {out / 'run'}")


if __name__ == "__main__":
    main()
