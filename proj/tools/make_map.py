"""Writes a seeded 32x32 grid with 102 obstacles whose free cells stay connected."""
import random
import sys
from collections import deque

H = W = 32
OBSTACLES = 102


def connected(blocked):
    free = [(r, c) for r in range(H) for c in range(W) if (r, c) not in blocked]
    seen = {free[0]}
    q = deque([free[0]])
    while q:
        r, c = q.popleft()
        for nr, nc in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            if 0 <= nr < H and 0 <= nc < W and (nr, nc) not in blocked and (nr, nc) not in seen:
                seen.add((nr, nc))
                q.append((nr, nc))
    return len(seen) == len(free)


def main(path, seed=10):
    rng = random.Random(seed)
    blocked = set()
    while len(blocked) < OBSTACLES:
        cell = (rng.randrange(H), rng.randrange(W))
        if cell in blocked:
            continue
        blocked.add(cell)
        if not connected(blocked):
            blocked.remove(cell)
    with open(path, "w") as f:
        f.write(f"type octile\nheight {H}\nwidth {W}\nmap\n")
        for r in range(H):
            f.write("".join("@" if (r, c) in blocked else "." for c in range(W)) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/random-32-32-10.map")
