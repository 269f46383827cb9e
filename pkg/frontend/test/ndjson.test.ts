import { describe, expect, it } from "vitest";

import { readNdjson } from "../src/ndjson.js";
import { FRONTIER_LINES } from "./fixtures.js";

function streamOf(chunks: string[]): ReadableStream<Uint8Array> {
  const encoder = new TextEncoder();
  let i = 0;
  return new ReadableStream({
    pull(controller) {
      if (i < chunks.length) {
        controller.enqueue(encoder.encode(chunks[i]));
        i += 1;
      } else {
        controller.close();
      }
    },
  });
}

async function collect<T>(gen: AsyncGenerator<T>): Promise<T[]> {
  const out: T[] = [];
  for await (const item of gen) out.push(item);
  return out;
}

describe("readNdjson", () => {
  it("parses one object per line", async () => {
    const body = FRONTIER_LINES.map((ln) => ln + "\n").join("");
    const objs = await collect(readNdjson<{ target_std: number }>(streamOf([body])));
    expect(objs).toHaveLength(FRONTIER_LINES.length);
    expect(objs.map((o) => o.target_std)).toEqual([20, 40, 60]);
  });

  it("tolerates chunk boundaries inside lines and values", async () => {
    const body = FRONTIER_LINES.map((ln) => ln + "\n").join("");
    const cuts = [7, 19, Math.floor(body.length / 2), body.length - 3];
    const chunks: string[] = [];
    let prev = 0;
    for (const c of cuts) {
      chunks.push(body.slice(prev, c));
      prev = c;
    }
    chunks.push(body.slice(prev));
    const objs = await collect(readNdjson<{ target_std: number }>(streamOf(chunks)));
    expect(objs.map((o) => o.target_std)).toEqual([20, 40, 60]);
  });

  it("skips blank lines and parses an unterminated tail", async () => {
    const objs = await collect(
      readNdjson<{ a: number }>(streamOf(['{"a":1}\n', "\n\n", '{"a":2}'])),
    );
    expect(objs).toEqual([{ a: 1 }, { a: 2 }]);
  });

  it("stops cleanly when the consumer abandons the stream", async () => {
    const body = FRONTIER_LINES.map((ln) => ln + "\n").join("");
    const gen = readNdjson<{ target_std: number }>(streamOf([body]));
    const first = await gen.next();
    expect((first.value as { target_std: number }).target_std).toBe(20);
    await gen.return(undefined as never);
    const after = await gen.next();
    expect(after.done).toBe(true);
  });
});
