/** Fixed-capacity FIFO ring buffer; eviction drops the oldest entry. */
export class RingBuffer<T> {
  private items: T[] = [];

  constructor(readonly capacity: number) {
    if (capacity < 1) {
      throw new Error("ring buffer capacity must be >= 1");
    }
  }

  push(item: T): void {
    this.items.push(item);
    if (this.items.length > this.capacity) {
      this.items.shift();
    }
  }

  get length(): number {
    return this.items.length;
  }

  at(i: number): T {
    return this.items[i];
  }

  first(): T | undefined {
    return this.items[0];
  }

  last(): T | undefined {
    return this.items[this.items.length - 1];
  }

  toArray(): readonly T[] {
    return this.items;
  }

  clear(): void {
    this.items = [];
  }
}
