/** Thin typed client for the annotation service. */

import type {
  DocListEntry, DocumentSnapshot, EditOp, PreviewResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number,
              readonly currentVersion?: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string = "",
              readonly actor: string = "annotator",
              private readonly fetchFn: typeof fetch =
                  globalThis.fetch.bind(globalThis)) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const text = await response.text();
    const body = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const detail = body?.detail ?? response.statusText;
      throw new ApiError(String(detail), response.status,
                         body?.current_version);
    }
    return body as T;
  }

  listDocs(): Promise<DocListEntry[]> {
    return this.request<DocListEntry[]>("/docs");
  }

  getDoc(docId: string): Promise<DocumentSnapshot> {
    return this.request<DocumentSnapshot>(
      `/docs/${encodeURIComponent(docId)}`);
  }

  preview(docId: string, mode: "hrp" | "mrp",
          transfer = false): Promise<PreviewResponse> {
    const params = new URLSearchParams({
      mode, transfer: transfer ? "true" : "false",
    });
    return this.request<PreviewResponse>(
      `/docs/${encodeURIComponent(docId)}/preview?${params}`);
  }

  exportDoc(docId: string): Promise<string> {
    return this.fetchFn(
      `${this.baseUrl}/docs/${encodeURIComponent(docId)}/export`)
      .then((r) => r.text());
  }

  /** Post an atomic batch; resolves to the new version. */
  async applyOps(docId: string, expectedVersion: number,
                 ops: EditOp[]): Promise<number> {
    const body = await this.request<{ version: number }>(
      `/docs/${encodeURIComponent(docId)}/edits`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({
          expected_version: expectedVersion,
          actor: this.actor,
          ops,
        }),
      });
    return body.version;
  }
}
