"""Priority queues for cost-ordered frontiers.

``KeyedQueue`` is a binary heap; ``BucketQueue`` is a ring of FIFO buckets
indexed by integer key, with a heap kept aside for keys that fall outside the
ring's window.  Both break ties first-in first-out and both count their work
in ``steps`` so that enumeration delay can be compared without a stopwatch.
"""
from __future__ import annotations

import heapq
from collections import deque
from itertools import count
from typing import Any, Hashable

from .errors import EmptyQueue, MonotonicityViolation


class KeyedQueue:
    """Binary min-heap with FIFO tie-breaking.

    ``steps`` charges every push/pop ``1 + floor(log2(size))``, the sift depth
    of a binary heap of that size.
    """

    def __init__(self):
        self._heap: list[tuple[Any, int, Any]] = []
        self._seq = count()
        self.steps = 0
        self.pushes = 0
        self.pops = 0

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)

    def push(self, item, key) -> None:
        heap = self._heap
        heapq.heappush(heap, (key, next(self._seq), item))
        self.pushes += 1
        self.steps += len(heap).bit_length()

    def pop(self):
        heap = self._heap
        if not heap:
            raise EmptyQueue("pop from empty queue")
        self.steps += len(heap).bit_length()
        self.pops += 1
        key, _, item = heapq.heappop(heap)
        return item, key

    def peek(self):
        if not self._heap:
            raise EmptyQueue("peek into empty queue")
        key, _, item = self._heap[0]
        return item, key

    def peek_key(self):
        if not self._heap:
            raise EmptyQueue("peek into empty queue")
        return self._heap[0][0]

    def keys(self) -> list:
        return sorted(k for k, _, _ in self._heap)

    @property
    def overflow_pushes(self) -> int:
        return 0


class BucketQueue:
    """Constant-time queue for integer keys with bounded spread.

    Ring bucket ``(j + key - base_key) % size`` holds the items of ``key`` for
    ``base_key <= key < base_key + size``; larger keys wait in an overflow heap
    and are moved into the ring once the window reaches them.  Keys below the
    last popped key are refused.
    """

    def __init__(self, size: int = 20):
        if size < 1:
            raise ValueError("bucket queue needs at least one bucket")
        self.size = size
        self._buckets: list[deque] = [deque() for _ in range(size)]
        self._j = 0
        self._base = 0
        self._ring_count = 0
        self._overflow: list[tuple[int, int, Any]] = []
        self._seq = count()
        self._floor: int | None = None
        self.steps = 0
        self.pushes = 0
        self.pops = 0
        self.overflow_pushes = 0

    def __len__(self) -> int:
        return self._ring_count + len(self._overflow)

    def __bool__(self) -> bool:
        return self._ring_count > 0 or bool(self._overflow)

    def push(self, item, key: int) -> None:
        if self._floor is not None and key < self._floor:
            raise MonotonicityViolation(
                f"key {key} below last popped key {self._floor}"
            )
        self.pushes += 1
        self.steps += 1
        seq = next(self._seq)
        if not self:
            self._base = key
            self._j = 0
        elif key < self._base:
            self._rewind(key)
        offset = key - self._base
        if offset < self.size:
            self._buckets[(self._j + offset) % self.size].append((seq, item))
            self._ring_count += 1
        else:
            self.overflow_pushes += 1
            heapq.heappush(self._overflow, (key, seq, item))

    def _rewind(self, key: int) -> None:
        # Only reachable before the first pop or after the window moved past
        # empty buckets; the top of the window is evicted to overflow.
        shift = self._base - key
        size = self.size
        for d in range(min(shift, size)):
            pos = (self._j - 1 - d) % size
            bucket = self._buckets[pos]
            self.steps += 1
            if bucket:
                k = self._base + size - 1 - d
                for seq, item in bucket:
                    self.overflow_pushes += 1
                    heapq.heappush(self._overflow, (k, seq, item))
                self._ring_count -= len(bucket)
                bucket.clear()
        self._j = (self._j - shift) % size
        self._base = key

    def _settle(self) -> None:
        """Advance ``j`` to the first non-empty bucket (or refill from overflow)."""
        size = self.size
        buckets = self._buckets
        if self._ring_count == 0:
            if not self._overflow:
                raise EmptyQueue("queue is empty")
            self._base = self._overflow[0][0]
            self._j = 0
            self._drain_overflow()
            return
        while not buckets[self._j]:
            self._j = (self._j + 1) % size
            self._base += 1
            self.steps += 1
            if self._overflow and self._overflow[0][0] < self._base + size:
                self._drain_overflow()

    def _drain_overflow(self) -> None:
        limit = self._base + self.size
        overflow = self._overflow
        while overflow and overflow[0][0] < limit:
            key, seq, item = heapq.heappop(overflow)
            self.steps += 1
            bucket = self._buckets[(self._j + key - self._base) % self.size]
            # items arriving from overflow may be older than ring items of the
            # same key only if they were evicted by a rewind; keep seq order
            if bucket and bucket[-1][0] > seq:
                entries = sorted([*bucket, (seq, item)], key=lambda e: e[0])
                bucket.clear()
                bucket.extend(entries)
            else:
                bucket.append((seq, item))
            self._ring_count += 1

    def pop(self):
        self._settle()
        _, item = self._buckets[self._j].popleft()
        self._ring_count -= 1
        self.pops += 1
        self.steps += 1
        self._floor = self._base
        return item, self._base

    def peek(self):
        self._settle()
        return self._buckets[self._j][0][1], self._base

    def peek_key(self) -> int:
        self._settle()
        return self._base

    def keys(self) -> list[int]:
        out = []
        for d in range(self.size):
            out += [self._base + d] * len(self._buckets[(self._j + d) % self.size])
        out += [k for k, _, _ in self._overflow]
        return sorted(out)


def make_queue(bucketing: bool, size: int = 20):
    return BucketQueue(size) if bucketing else KeyedQueue()
