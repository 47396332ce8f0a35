#!/usr/bin/env python3
"""Writes the bundled synthetic corpora used by the tests and the demo config.

Three small picture-description corpora in different styles (child, llm_zs,
llm_fs), each with a CoNLL-U tag file, plus two "twin" corpora sampled from
one generator with different seeds. Output is fully determined by --seed.

    python3 tools/make_synthetic.py --out data/synthetic
"""

import argparse
import json
import random
import struct
import zlib
from pathlib import Path

NAMES = ["Lars", "Lea", "Dodo"]

# story -> (nouns with article, verbs, adjectives)
STORIES = {
    "hund": (
        [("der", "Hund"), ("der", "Knochen"), ("die", "Leine"), ("der", "Garten"), ("die", "Hundehütte"),
         ("der", "Ball"), ("die", "Wiese"), ("der", "Zaun")],
        ["bellt", "rennt", "springt", "schnüffelt", "bringt", "wedelt"],
        ["braune", "wilde", "laute", "nasse"],
    ),
    "fenster": (
        [("das", "Fenster"), ("die", "Scheibe"), ("der", "Vorhang"), ("der", "Vogel"), ("der", "Blumentopf"),
         ("die", "Leiter"), ("das", "Dach"), ("die", "Katze")],
        ["klettert", "schaut", "öffnet", "fällt", "fliegt", "ruft"],
        ["offene", "hohe", "kaputte", "kleine"],
    ),
    "tasche": (
        [("die", "Tasche"), ("der", "Schulranzen"), ("das", "Heft"), ("der", "Stift"), ("die", "Brotdose"),
         ("die", "Schule"), ("der", "Bus"), ("die", "Lehrerin")],
        ["packt", "sucht", "vergisst", "trägt", "findet", "verliert"],
        ["schwere", "rote", "volle", "alte"],
    ),
    "staubsauger": (
        [("der", "Staubsauger"), ("der", "Teppich"), ("das", "Sofa"), ("das", "Kabel"), ("das", "Zimmer"),
         ("die", "Socke"), ("der", "Schrank"), ("der", "Krümel")],
        ["saugt", "räumt", "zieht", "erschrickt", "putzt", "versteckt"],
        ["laute", "staubige", "große", "neue"],
    ),
}

GENERAL_NOUNS = [("die", "Mutter"), ("der", "Vater"), ("das", "Haus"), ("der", "Tag"), ("das", "Mädchen"),
                 ("der", "Junge"), ("das", "Klassenzimmer"), ("die", "Freundin")]
GENERAL_VERBS = ["sieht", "sagt", "geht", "lacht", "kommt", "hilft"]
GENERAL_ADJ = ["lustige", "traurige", "glückliche", "müde"]
ADVERBS = ["dann", "plötzlich", "schnell", "jetzt", "endlich", "wieder"]
PREPS = ["in", "auf", "neben", "unter", "hinter"]
LLM_WORDS = [("die", "Bildbeschreibung"), ("die", "Szene"), ("das", "Bild"), ("die", "Geschichte")]
LONG_WORDS = ["verschwunden", "erschrocken", "aufgeregt", "überrascht"]


class Writer:
    """Collects one document as tokens with UPOS tags, sentence by sentence."""

    def __init__(self):
        self.sentences = []
        self.cur = []

    def add(self, word, tag):
        self.cur.append((word, tag))

    def end(self, punct="."):
        if punct:
            self.cur.append((punct, "PUNCT"))
        self.sentences.append(self.cur)
        self.cur = []

    def text(self):
        out = []
        for sent in self.sentences:
            parts = []
            for i, (w, tag) in enumerate(sent):
                if tag == "PUNCT" and w in ".,!?:" and parts:
                    parts[-1] += w
                else:
                    parts.append(w[0].upper() + w[1:] if i == 0 else w)
            out.append(" ".join(parts))
        return " ".join(out)


class Generator:
    def __init__(self, rng, style):
        self.rng = rng
        self.style = style
        self.focus = {"child": 0.75, "llm_zs": 0.6, "llm_fs": 0.7, "twin": 0.8}[style]

    def noun(self, story):
        if self.style == "llm_zs" and self.rng.random() < 0.15:
            return self.rng.choice(LLM_WORDS)
        pool = STORIES[story][0] if self.rng.random() < self.focus else GENERAL_NOUNS
        return self.rng.choice(pool)

    def verb(self, story):
        pool = STORIES[story][1] if self.rng.random() < self.focus else GENERAL_VERBS
        return self.rng.choice(pool)

    def adj(self, story):
        pool = STORIES[story][2] if self.rng.random() < self.focus else GENERAL_ADJ
        return self.rng.choice(pool)

    def np(self, w, story, adjectives):
        det, n = self.noun(story)
        w.add(det, "DET")
        for _ in range(adjectives):
            w.add(self.adj(story), "ADJ")
        w.add(n, "NOUN")

    def subject(self, w, story):
        if self.rng.random() < 0.5:
            w.add(self.rng.choice(NAMES), "PROPN")
        else:
            self.np(w, story, 0)

    def n_adj(self):
        p = {"child": 0.1, "llm_zs": 0.6, "llm_fs": 0.35, "twin": 0.3}[self.style]
        n = 0
        while n < 2 and self.rng.random() < p:
            n += 1
        return n

    def clause(self, w, story):
        kind = self.rng.randrange(5)
        if kind == 0:
            self.subject(w, story)
            w.add(self.verb(story), "VERB")
            self.np(w, story, self.n_adj())
        elif kind == 1:
            w.add(self.rng.choice(ADVERBS), "ADV")
            w.add(self.verb(story), "VERB")
            self.subject(w, story)
            w.add(self.rng.choice(PREPS), "ADP")
            self.np(w, story, self.n_adj())
        elif kind == 2:
            self.np(w, story, self.n_adj())
            w.add(self.verb(story), "VERB")
            w.add(self.rng.choice(ADVERBS), "ADV")
        elif kind == 3:
            self.subject(w, story)
            w.add("ist", "AUX")
            w.add(self.rng.choice(LONG_WORDS), "ADJ")
        else:
            self.subject(w, story)
            w.add(self.verb(story), "VERB")
            w.add("nicht", "PART")

    def sentence(self, w, story):
        self.clause(w, story)
        if self.style == "child":
            # run-on chains of "und dann"
            while self.rng.random() < 0.35:
                w.add("und", "CCONJ")
                w.add("dann", "ADV")
                self.clause(w, story)
            if self.rng.random() < 0.3:
                w.end("!")
                return
        else:
            extra = {"llm_zs": 0.7, "llm_fs": 0.4, "twin": 0.4}[self.style]
            while self.rng.random() < extra:
                if self.rng.random() < 0.5:
                    w.add(",", "PUNCT")
                    w.add("weil", "SCONJ")
                else:
                    w.add("und", "CCONJ")
                self.clause(w, story)
                extra *= 0.6
        w.end(".")

    def document(self, story):
        w = Writer()
        n = {"child": (4, 9), "llm_zs": (6, 10), "llm_fs": (4, 7), "twin": (5, 8)}[self.style]
        if self.style == "llm_zs" and self.rng.random() < 0.5:
            w.add("auf", "ADP")
            w.add("dem", "DET")
            w.add("Bild", "NOUN")
            w.add("sieht", "VERB")
            w.add("man", "PRON")
            w.add("eine", "DET")
            w.add("Geschichte", "NOUN")
            w.end(".")
        for _ in range(self.rng.randint(*n)):
            self.sentence(w, story)
        return w


def conllu(docs):
    lines = []
    for doc_id, w in docs:
        lines.append(f"# newdoc id = {doc_id}")
        for k, sent in enumerate(w.sentences, 1):
            lines.append(f"# sent_id = {doc_id}-{k}")
            for i, (form, tag) in enumerate(sent, 1):
                if i == 1:
                    form = form[0].upper() + form[1:]
                lines.append(f"{i}\t{form}\t_\t{tag}\t_\t_\t_\t_\t_\t_")
            lines.append("")
    return "\n".join(lines) + "\n"


def write_corpus(out, name, style, source, per_story, seed):
    rng = random.Random(seed)
    gen = Generator(rng, style)
    docs = []
    records = []
    for story in STORIES:
        for k in range(per_story):
            doc_id = f"{name}-{story}-{k + 1:04d}"
            w = gen.document(story)
            docs.append((doc_id, w))
            records.append({"id": doc_id, "story": story, "source": source, "text": w.text(),
                            "meta": {"generator": "make_synthetic", "style": style}})
    with open(out / f"{name}.jsonl", "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    with open(out / f"{name}.conllu", "w", encoding="utf-8") as f:
        f.write(conllu(docs))


def png(width, height, rgb):
    raw = b"".join(b"\x00" + bytes(rgb) * width for _ in range(height))

    def chunk(kind, data):
        body = kind + data
        return struct.pack(">I", len(data)) + body + struct.pack(">I", zlib.crc32(body) & 0xFFFFFFFF)

    header = struct.pack(">IIBBBBB", width, height, 8, 2, 0, 0, 0)
    return b"\x89PNG\r\n\x1a\n" + chunk(b"IHDR", header) + chunk(b"IDAT", zlib.compress(raw, 9)) + chunk(b"IEND", b"")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=Path("data/synthetic"))
    ap.add_argument("--seed", type=int, default=20240611)
    args = ap.parse_args()
    out = args.out
    (out / "images").mkdir(parents=True, exist_ok=True)

    write_corpus(out, "child", "child", "child", 12, args.seed)
    write_corpus(out, "llm_zs", "llm_zs", "llm-zs", 12, args.seed + 1)
    write_corpus(out, "llm_fs", "llm_fs", "llm-fs", 12, args.seed + 2)
    write_corpus(out, "twin_a", "twin", "other", 80, args.seed + 3)
    write_corpus(out, "twin_b", "twin", "other", 80, args.seed + 4)

    colors = [(200, 80, 40), (40, 120, 200), (60, 170, 90), (150, 150, 40)]
    for story, rgb in zip(STORIES, colors):
        (out / "images" / f"{story}.png").write_bytes(png(4, 3, rgb))

    config = {
        "corpora": [
            {"name": "child", "manifest": "child.jsonl", "conllu": "child.conllu"},
            {"name": "llm_zs", "manifest": "llm_zs.jsonl", "conllu": "llm_zs.conllu"},
            {"name": "llm_fs", "manifest": "llm_fs.jsonl", "conllu": "llm_fs.conllu"},
        ],
        "reference": "child",
        "focus": "llm_fs",
        "stopwords": "../stopwords_de.txt",
        "names": NAMES,
        "text_layer": "synthetic",
        "seed": 7,
        "embedding": {"dim": 24, "window": 4, "epochs": 5, "negatives": 5, "lr0": 0.05, "min_count": 2,
                      "buckets": 20000},
        "semantic": {"bootstrap": 200, "min_count": 2},
    }
    (out / "pipeline.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")

    plan = {
        "mode": "few_shot",
        "corpus_name": "llm_fs_regen",
        "seed": 11,
        "reference_corpus": "child.jsonl",
        "stories": {s: {"image": f"images/{s}.png", "count": 2} for s in STORIES},
        "endpoint": {"base_url": "http://127.0.0.1:8080/v1", "model": "gpt-4o", "api_key_env": "OPENAI_API_KEY"},
        "checkpoint": "llm_fs_regen.checkpoint.jsonl",
        "output": "llm_fs_regen.jsonl",
    }
    (out / "plan_few_shot.json").write_text(json.dumps(plan, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
