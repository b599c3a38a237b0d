#!/usr/bin/env python3
"""Regenerates tests/fixtures/corpus.json, the mock instance's frozen corpus.

Deterministic (fixed seed). Layout, so scenario counts can be checked by hand:

  alice@example.social     local   followed   35 posts (5 are boosts of @mastodon)
  bob@example.social       local              35 posts
  carol@example.social     local              30 posts
  mastodon@mastodon.social remote             40 posts
  dave@fosstodon.org       remote  followed   30 posts
  erin@hachyderm.io        remote             30 posts

Hashtags: #birds (followed by the test user), #rust, #coffee.

Only bob, carol and erin's posts without #birds get interactions, so the
trending window never overlaps the home window or @mastodon's statuses.
"""

import datetime as dt
import json
import pathlib
import random

SEED = 1729
NOW = dt.datetime(2024, 3, 2, 0, 0, 0, tzinfo=dt.timezone.utc)
SPAN_MINUTES = 48 * 60

ACCOUNTS = [
    ("a1", "alice@example.social", True, 35),
    ("a2", "bob@example.social", False, 35),
    ("a3", "carol@example.social", False, 30),
    ("m1", "mastodon@mastodon.social", False, 40),
    ("a5", "dave@fosstodon.org", True, 30),
    ("a6", "erin@hachyderm.io", False, 30),
]
TRENDING_ELIGIBLE = {"a2", "a3", "a6"}

TOPICS = [
    ("spotted a heron by the canal", ["birds"]),
    ("the finches are back at the feeder", ["birds"]),
    ("borrow checker finally clicked for me", ["rust"]),
    ("cargo build times are getting better", ["rust"]),
    ("pour-over or french press?", ["coffee"]),
    ("new beans from the roaster down the street", ["coffee"]),
    ("release notes for the next server version are up", []),
    ("community meetup this friday, everyone welcome", []),
    ("reading a good book about federated protocols", []),
    ("rainy day, staying in and writing code", []),
    ("hot take: chronological timelines are underrated", []),
    ("Get rich quick with this CRYPTO coin", []),
]


def iso(t):
    return t.strftime("%Y-%m-%dT%H:%M:%S.") + f"{t.microsecond // 1000:03d}Z"


def main():
    rng = random.Random(SEED)
    raw = []
    for acc_id, handle, _, count in ACCOUNTS:
        minutes = rng.sample(range(5, SPAN_MINUTES), count)
        for m in minutes:
            raw.append({"account_id": acc_id, "minute": m})

    # Snowflake-like ids: fixed width, increasing with time.
    raw.sort(key=lambda p: (-p["minute"], p["account_id"]))
    for seq, p in enumerate(raw):
        p["id"] = str(111000000000000000 + seq * 1000)

    mastodon_ids = [p["id"] for p in raw if p["account_id"] == "m1"]
    by_minute = {p["id"]: p["minute"] for p in raw}
    alice_boosts_left = 5

    posts = []
    for p in sorted(raw, key=lambda p: p["id"]):
        created = NOW - dt.timedelta(minutes=p["minute"])
        text, tags = rng.choice(TOPICS)
        boost_of = None
        if p["account_id"] == "a1" and alice_boosts_left > 0:
            older = [i for i in mastodon_ids if by_minute[i] > p["minute"]]
            if older:
                boost_of = rng.choice(older)
                alice_boosts_left -= 1
        boosts = favorites = 0
        if boost_of is None and p["account_id"] in TRENDING_ELIGIBLE and "birds" not in tags:
            boosts = rng.randint(0, 40)
            favorites = rng.randint(1, 80)
        entry = {
            "id": p["id"],
            "account_id": p["account_id"],
            "created_at": iso(created),
            "content": "" if boost_of else f"<p>{text}</p>",
            "tags": [] if boost_of else tags,
            "boosts": boosts,
            "favorites": favorites,
            "boost_of": boost_of,
        }
        if boost_of is None and tags:
            entry["content"] = f"<p>{text} " + " ".join(
                f'<a href="https://example.social/tags/{t}" class="mention hashtag">#<span>{t}</span></a>'
                for t in tags) + "</p>"
        posts.append(entry)

    corpus = {
        "domain": "example.social",
        "now": iso(NOW),
        "require_auth_for_public": False,
        "followed_hashtags": ["birds"],
        "accounts": [
            {"id": a, "handle": h, "followed": f, "suspended": False}
            for a, h, f, _ in ACCOUNTS
        ],
        "posts": posts,
        "oauth": {
            "valid_codes": ["code-alpha", "code-beta", "code-gamma", "code-delta"],
            "token": "mock-token-read",
            "granted_scope": "read",
        },
        "faults": [],
    }
    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "corpus.json"
    out.write_text(json.dumps(corpus, indent=1) + "\n")
    print(f"wrote {len(posts)} posts to {out}")


if __name__ == "__main__":
    main()
