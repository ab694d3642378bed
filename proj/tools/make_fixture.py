#!/usr/bin/env python3
"""Generate the bundled end-to-end fixture under fixtures/e2e.

The fixture is small and hand-designed: 24 labelled-positive seed accounts,
24 keyword-named negatives, collective accounts without keyword names that
the classifier should pick up during expansion, and ordinary accounts it should
reject. Account 1000001 is a hub that every network member follows and that
follows two of them back, so it should win every centrality measure.

expected.json holds the values the acceptance test compares against. The fused
ranking there is computed with networkx, independently of the C++ code.
"""

import argparse
import json
import random
from collections import Counter
from pathlib import Path

import networkx as nx

SEED = 20240611
PLANTED_K = 8
TWEETS_PER_ACCOUNT = 400
TWEET_WORDS = 12


def profile(account_id, username, screen_name, description, created, last, fawkes=False, businessman=False,
            rnd=None):
    return {
        "account_id": account_id,
        "username": username,
        "screen_name": screen_name,
        "description": description,
        "tweet_count": rnd.randint(10, 40000),
        "follower_count": rnd.randint(0, 9000),
        "friend_count": rnd.randint(0, 3000),
        "favourites_count": rnd.randint(0, 20000),
        "listed_count": rnd.randint(0, 200),
        "location_provided": rnd.random() < 0.5,
        "is_protected": False,
        "url_provided": rnd.random() < 0.3,
        "has_fawkes_image": fawkes,
        "has_businessman_image": businessman,
        "created_at": created,
        "last_tweet_at": last,
    }


POSITIVES = 24
NEGATIVES = 24
EXPANSION = ["3000001", "3000002", "3000003", "3000004", "3000005"]
HUB = "1000001"

POSITIVE_DESC = [
    "We are Anonymous. We are Legion. Expect us.",
    "Anonymous news, #OpIcarus and #OpSafeWinter updates.",
    "Anon activist. We do not forgive. We do not forget.",
    "Part of the legion. Knowledge is free.",
    "AnonOps relay. Expect us!",
    "we are anonymous, we are legion",
    "Anonymous collective. Free speech for everyone.",
    "Legion never sleeps. #AnonOps",
]
NEGATIVE_DESC = [
    "Coffee lover, dog person, amateur photographer.",
    "Sports fan. Tweets about football and food.",
    "Marketing professional. Views my own.",
    "Music, movies and the occasional rant about trains.",
    "PhD student in ecology. I like birds and maps.",
    "Gamer and streamer. Catch me live on weekends!",
    "Gardening enthusiast, baking on Sundays.",
    "Software developer who writes about databases.",
]
KEYWORDS = ["Anon", "Anonymous", "Legion", "An0n", "l3gion", "Anony"]
PARTS = ["Fox", "Ghost", "Nova", "River", "Echo", "Shadow", "Pixel", "Storm", "Luna", "Raven", "Byte", "Orbit"]


def names(rnd, i, keyword):
    plain_user = rnd.choice(PARTS) + rnd.choice(PARTS)
    plain_screen = rnd.choice(PARTS).lower() + "_" + str(i)
    if not keyword:
        return plain_user, plain_screen
    kw = rnd.choice(KEYWORDS)
    where = rnd.random()
    if where < 0.5:
        return kw + rnd.choice(PARTS), plain_screen
    if where < 0.8:
        return plain_user, kw.lower() + "_" + str(i)
    return kw + rnd.choice(PARTS), kw + "_" + str(i)


def build_accounts(rnd):
    accounts = []
    seeds = []
    for i in range(POSITIVES):
        aid = str(1000001 + i)
        seeds.append(aid)
        user, screen = names(rnd, i, True)
        if aid == HUB:
            user = "AnonHub"
        accounts.append(profile(aid, user, screen, POSITIVE_DESC[i % 8], f"{2009 + (i * 5) % 7}-03-{10 + i % 18}",
                                "2016-05-01", fawkes=(i % 3 != 2), businessman=(i % 3 == 2), rnd=rnd))
    # Keyword-named negatives: no keyword in the description.
    for i in range(NEGATIVES):
        aid = str(2000001 + i)
        user, screen = names(rnd, i, True)
        accounts.append(profile(aid, user, screen, NEGATIVE_DESC[i % 8], f"{2009 + i % 6}-07-{10 + i % 18}",
                                None if i == 3 else "2018-01-15", fawkes=(i % 7 == 0), rnd=rnd))
    # Collective accounts without keyword names: expansion targets.
    for j, aid in enumerate(EXPANSION):
        user, screen = names(rnd, 100 + j, False)
        accounts.append(profile(aid, user, screen, POSITIVE_DESC[(j * 3) % 8], f"{2011 + j % 3}-0{j + 1}-20",
                                "2017-03-03", fawkes=True, rnd=rnd))
    # Ordinary accounts the classifier should reject.
    for i in range(6):
        aid = str(4000001 + i)
        user, screen = names(rnd, 200 + i, False)
        accounts.append(profile(aid, user, screen, NEGATIVE_DESC[(i + 3) % 8], f"{2010 + i}-09-09", "2019-09-09",
                                rnd=rnd))
    return accounts, seeds


def build_edges(rnd):
    others = [str(1000002 + i) for i in range(POSITIVES - 1)]
    edges = [(m, HUB) for m in others + EXPANSION]
    edges += [(HUB, "1000002"), (HUB, "3000001")]
    # Sparse ties among seeds.
    for i, m in enumerate(others):
        target = others[(i * 7 + 3) % len(others)]
        if target != m:
            edges.append((m, target))
    # Expansion accounts also tie to seeds and to each other. All of them follow the hub, so stage one
    # already reaches every one; stage two finds nothing new.
    edges += [("3000001", "1000003"), ("3000002", "1000004"), ("1000005", "3000002"), ("3000003", "1000006"),
              ("3000004", "3000001"), ("3000001", "3000005"), ("3000005", "3000003")]
    # Ordinary accounts and keyword-named negatives follow or are followed by seeds.
    for i in range(6):
        edges.append((str(4000001 + i), others[i]))
        edges.append((others[i + 6], str(4000001 + i)))
    for i in range(NEGATIVES):
        edges.append((str(2000001 + i), others[i % len(others)]))
    # Noise the loader drops: a self-loop and a duplicate.
    edges.append(("4000001", "4000001"))
    edges.append(edges[0])
    return edges


def word_bank(rnd, n):
    consonants = "bdfgklmnprstvz"
    vowels = "aeiou"
    words = set()
    out = []
    while len(out) < n:
        w = "".join(rnd.choice(consonants) + rnd.choice(vowels) for _ in range(3))
        if w not in words:
            words.add(w)
            out.append(w)
    return out


def build_tweets(rnd, accounts_for_topics):
    tweets = []
    tid = 900000000
    for aid in accounts_for_topics:
        bank = word_bank(rnd, PLANTED_K * 30)
        topics = [bank[k * 30:(k + 1) * 30] for k in range(PLANTED_K)]
        weights = [1.0 / (i + 1) for i in range(30)]
        for j in range(TWEETS_PER_ACCOUNT):
            topic = j % PLANTED_K
            words = []
            for _ in range(TWEET_WORDS):
                t = topic if rnd.random() < 0.9 else rnd.randrange(PLANTED_K)
                words.append(rnd.choices(topics[t], weights)[0])
            r = rnd.random()
            if r < 0.1:
                text = "RT @someone: " + " ".join(words)
            elif r < 0.2:
                text = " ".join(words) + " https://t.co/x" + str(j)
            elif r < 0.3:
                text = "#" + words[0] + " " + " ".join(words[1:]) + " we're here"
            else:
                text = " ".join(words)
            day = 1 + j % 28
            month = 1 + (j // 28) % 12
            tweets.append({
                "account_id": aid,
                "tweet_id": str(tid),
                "created_at": f"2015-{month:02d}-{day:02d}T{(j * 7) % 24:02d}:{(j * 13) % 60:02d}:00Z",
                "text": text,
                "is_retweet": text.startswith("RT "),
            })
            tid += 1
    return tweets


def fused_ranking(members, edges):
    g = nx.DiGraph()
    g.add_nodes_from(members)
    member_set = set(members)
    g.add_edges_from((u, v) for u, v in edges if u in member_set and v in member_set and u != v)
    measures = [
        nx.degree_centrality(g),
        nx.eigenvector_centrality(g, max_iter=1000, tol=1e-10),
        nx.pagerank(g, alpha=0.85, tol=1e-12),
        nx.betweenness_centrality(g, normalized=False),
    ]
    fused = {n: 0.0 for n in members}
    for m in measures:
        lo, hi = min(m.values()), max(m.values())
        for n in members:
            fused[n] += 0.0 if hi == lo else (m[n] - lo) / (hi - lo)
    ranked = sorted(members, key=lambda n: (-fused[n] / 4.0, n))
    return ranked, {n: fused[n] / 4.0 for n in members}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures" / "e2e"))
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rnd = random.Random(SEED)

    accounts, seeds = build_accounts(rnd)
    edges = build_edges(rnd)
    members = sorted(seeds + EXPANSION)
    ranked, fused = fused_ranking(members, edges)
    top_accounts = ranked[:3]
    tweets = build_tweets(rnd, ranked[:6])

    with open(out / "snapshots.ndjson", "w", encoding="utf-8") as f:
        for a in accounts:
            f.write(json.dumps(a, ensure_ascii=False) + "\n")
    with open(out / "edges.tsv", "w", encoding="utf-8") as f:
        f.write("follower_id\tfollowee_id\n")
        for u, v in edges:
            f.write(f"{u}\t{v}\n")
    with open(out / "tweets.ndjson", "w", encoding="utf-8") as f:
        for t in tweets:
            f.write(json.dumps(t, ensure_ascii=False) + "\n")
    (out / "key.txt").write_text("fixture-pseudonym-key-7f3a\n", encoding="utf-8")

    by_id = {a["account_id"]: a for a in accounts}
    created = Counter(int(by_id[m]["created_at"][:4]) for m in members)
    config = {
        "seed": 7,
        "workers": 1,
        "paths": {"snapshots": "snapshots.ndjson", "edges": "edges.tsv", "tweets": "tweets.ndjson",
                  "output_dir": "out"},
        "pseudonym": {"key_file": "key.txt"},
        "classifier": {"model": "forest", "trees": 100, "folds": 5},
        "expansion": {"stages": 2},
        "centrality": {"top_k": 5, "curve_limit": 20, "subgraph_k": 8},
        "temporal": {"top_k": [5, 10, 50], "from": 2011, "to": 2013},
        "topics": {"accounts": 3, "tweet_limit": 300, "grid": [2, 8, 14], "seeds_per_k": 3, "iterations": 200,
                   "overrides": {top_accounts[2]: 6}},
    }
    (out / "config.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    expected = {
        "candidates": sum(1 for a in accounts if a["account_id"][0] in "12"),
        "positives": len(seeds),
        "negatives": NEGATIVES,
        "network_members": members,
        "fused_winner": ranked[0],
        "fused_ranking": ranked,
        "fused_scores": {n: round(fused[n], 9) for n in ranked},
        "created_per_year": {str(y): c for y, c in sorted(created.items())},
        "topic_accounts": top_accounts,
        "planted_topics": PLANTED_K,
        "override_account": top_accounts[2],
    }
    (out / "expected.json").write_text(json.dumps(expected, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
