"""Degree per node of the undirected simple graph in an edge file.

Usage: python3 graph_degrees.py ../data/edges20.tsv
"""
import sys

edges = set()
with open(sys.argv[1], encoding="utf-8") as f:
    for line in f:
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        a, b = line.split("\t")
        if a != b:
            edges.add(frozenset((a, b)))
nodes = sorted({n for e in edges for n in e})
print("edges", len(edges))
for n in nodes:
    print(n, sum(1 for e in edges if n in e))
