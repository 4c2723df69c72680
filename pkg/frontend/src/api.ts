/** Typed client for the inference service; the base URL is the only knob. */

import type { EngagementState } from "./schema.js";

export interface PredictResponse {
    index: number;
    model_id: string;
}

export interface SweepPoint {
    value: number | string;
    index: number;
}

export interface ModelInfo {
    model_id: string;
    schema: string[];
    n_trees: number;
    hyperparams: Record<string, number>;
    metadata: Record<string, unknown>;
    trained_at: string | null;
}

export interface NumericSweepSpec {
    field: string;
    lo: number;
    hi: number;
    steps: number;
}

export class ServiceError extends Error {
    constructor(
        public status: number,
        message: string,
    ) {
        super(message);
    }
}

async function post<T>(url: string, body: unknown): Promise<T> {
    const resp = await fetch(url, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
    });
    if (!resp.ok) {
        let detail = resp.statusText;
        try {
            const doc = await resp.json();
            detail = JSON.stringify(doc.errors ?? doc.detail ?? doc);
        } catch {
            /* keep statusText */
        }
        throw new ServiceError(resp.status, detail);
    }
    return (await resp.json()) as T;
}

export class ApiClient {
    constructor(public baseUrl: string) {}

    private url(path: string): string {
        return this.baseUrl.replace(/\/$/, "") + path;
    }

    async predict(state: EngagementState): Promise<PredictResponse> {
        return post<PredictResponse>(this.url("/api/v1/predict"), state);
    }

    async sweepNumeric(base: EngagementState, spec: NumericSweepSpec): Promise<SweepPoint[]> {
        return post<SweepPoint[]>(this.url("/api/v1/sweep"), { base, ...spec });
    }

    async sweepCategorical(base: EngagementState, field: string): Promise<SweepPoint[]> {
        return post<SweepPoint[]>(this.url("/api/v1/sweep"), { base, field });
    }

    async modelInfo(): Promise<ModelInfo> {
        const resp = await fetch(this.url("/api/v1/model"));
        if (!resp.ok) {
            throw new ServiceError(resp.status, resp.statusText);
        }
        return (await resp.json()) as ModelInfo;
    }
}
