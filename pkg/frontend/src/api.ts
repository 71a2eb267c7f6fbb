// Thin client for the mindmapper HTTP API. Raw response bodies are kept so
// callers can assert byte-level determinism against direct requests.

import type { ScenePayload, SessionCreated } from './types.js';

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

export interface ApiResponse<T> {
  raw: string;
  data: T;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: string): Promise<ApiResponse<T>> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      body,
      headers: body === undefined ? undefined : { 'content-type': 'application/json' },
    });
    const raw = await response.text();
    if (!response.ok) {
      let message = raw;
      try {
        message = (JSON.parse(raw) as { error?: string }).error ?? raw;
      } catch {
        // non-JSON error body: report it verbatim
      }
      throw new ApiError(response.status, message);
    }
    return { raw, data: JSON.parse(raw) as T };
  }

  health(): Promise<ApiResponse<{ status: string }>> {
    return this.request('GET', '/health');
  }

  uploadDocument(septJson: string): Promise<ApiResponse<{ document_id: string }>> {
    return this.request('POST', '/documents', septJson);
  }

  createSession(
    documentId: string,
    config?: Record<string, unknown>,
  ): Promise<ApiResponse<SessionCreated>> {
    return this.request('POST', '/sessions', JSON.stringify({
      document_id: documentId,
      ...(config ? { config } : {}),
    }));
  }

  expand(sessionId: string, frameId: string): Promise<ApiResponse<ScenePayload>> {
    return this.request('POST', `/sessions/${sessionId}/expand`,
      JSON.stringify({ frame_id: frameId }));
  }

  back(sessionId: string): Promise<ApiResponse<ScenePayload>> {
    return this.request('POST', `/sessions/${sessionId}/back`);
  }

  scene(sessionId: string): Promise<ApiResponse<ScenePayload>> {
    return this.request('GET', `/sessions/${sessionId}/scene`);
  }
}
