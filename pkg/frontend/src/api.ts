/** Thin fetch wrappers over the costeff JSON API. */

import { readNdjson } from "./ndjson.js";
import type {
  CostRequest,
  CostResponse,
  FrontierPoint,
  FrontierRequest,
  ModelsDescriptor,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function raiseForStatus(resp: Response): Promise<void> {
  if (resp.ok) return;
  let detail = `${resp.status}`;
  try {
    const body = await resp.json();
    if (typeof body.error === "string") {
      detail = body.error;
    } else if (Array.isArray(body.errors)) {
      detail = body.errors
        .map((e: { field: string; message: string }) => `${e.field}: ${e.message}`)
        .join("; ");
    }
  } catch {
    // non-JSON error body: keep the status text
  }
  throw new ApiError(resp.status, detail);
}

export async function getModels(baseUrl: string, fetchFn: typeof fetch = fetch): Promise<ModelsDescriptor> {
  const resp = await fetchFn(`${baseUrl}/api/models`);
  await raiseForStatus(resp);
  return (await resp.json()) as ModelsDescriptor;
}

export async function postCost(
  baseUrl: string,
  req: CostRequest,
  signal?: AbortSignal,
  fetchFn: typeof fetch = fetch,
): Promise<CostResponse> {
  const resp = await fetchFn(`${baseUrl}/api/cost`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(req),
    signal,
  });
  await raiseForStatus(resp);
  return (await resp.json()) as CostResponse;
}

/** Stream frontier points, invoking onPoint as each grid point completes. */
export async function streamFrontier(
  baseUrl: string,
  req: FrontierRequest,
  onPoint: (p: FrontierPoint) => void,
  signal?: AbortSignal,
  fetchFn: typeof fetch = fetch,
): Promise<void> {
  const resp = await fetchFn(`${baseUrl}/api/frontier`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(req),
    signal,
  });
  await raiseForStatus(resp);
  if (!resp.body) throw new ApiError(0, "response has no body stream");
  for await (const point of readNdjson<FrontierPoint>(resp.body)) {
    onPoint(point);
  }
}
