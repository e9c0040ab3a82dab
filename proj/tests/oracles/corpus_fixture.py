"""Paragraph and whitespace-word counts for tests/data/corpus10.jsonl.

Usage: python3 corpus_fixture.py ../data/corpus10.jsonl
"""
import json
import re
import sys


def paragraphs(record):
    if "paragraphs" in record:
        return record["paragraphs"]
    pieces = re.split(r"\n\s*\n", record["text"])
    return [p.strip() for p in pieces if p.strip()]


def main(path):
    total_paragraphs = 0
    total_words = 0
    with open(path, encoding="utf-8") as f:
        rows = [json.loads(line) for line in f if line.strip()]
    for record in sorted(rows, key=lambda r: r["id"]):
        paras = paragraphs(record)
        words = [len(p.split()) for p in paras]
        total_paragraphs += len(paras)
        total_words += sum(words)
        print(record["id"], len(paras), " ".join(map(str, words)))
    print("judgments", len(rows))
    print("avg_paragraphs", repr(total_paragraphs / len(rows)))
    print("avg_words_per_paragraph", repr(total_words / total_paragraphs))


if __name__ == "__main__":
    main(sys.argv[1])
