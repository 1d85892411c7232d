// Thin typed client for the configuration service. All engine math lives on
// the server; this module only moves JSON.

import type {
    AggregateParams,
    AggregateResult,
    EvaluateResponse,
    ModelDoc,
    Selection,
    SolutionOut
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
    constructor(
        public status: number,
        public error: string,
        public detail: string
    ) {
        super(`${error}: ${detail}`);
    }
}

async function parseError(response: Response): Promise<never> {
    let error = "request-failed";
    let detail = `${response.status}`;
    try {
        const body = await response.json();
        if (body && typeof body.error === "string") {
            error = body.error;
            detail = body.detail ?? detail;
        }
    } catch {
        // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, error, detail);
}

export class ServiceClient {
    constructor(
        private baseUrl: string = "",
        private fetchImpl: FetchLike = (input, init) => fetch(input, init)
    ) {}

    private async post<T>(path: string, body: unknown): Promise<T> {
        const response = await this.fetchImpl(this.baseUrl + path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body)
        });
        if (!response.ok) await parseError(response);
        return (await response.json()) as T;
    }

    async uploadModel(doc: ModelDoc): Promise<string> {
        const body = await this.post<{ modelId: string }>("/models", doc);
        return body.modelId;
    }

    async evaluate(modelId: string, selection: Selection): Promise<EvaluateResponse> {
        return this.post<EvaluateResponse>(`/models/${modelId}/evaluate`, { selection });
    }

    async pareto(modelId: string, node?: string): Promise<SolutionOut[]> {
        const query = node ? `?node=${encodeURIComponent(node)}` : "";
        const response = await this.fetchImpl(`${this.baseUrl}/models/${modelId}/pareto${query}`);
        if (!response.ok) await parseError(response);
        return (await response.json()) as SolutionOut[];
    }

    async aggregate(
        modelId: string,
        strategy: string,
        prototypes: Selection[],
        params: AggregateParams
    ): Promise<AggregateResult> {
        return this.post<AggregateResult>(`/models/${modelId}/aggregate`, {
            strategy,
            prototypes,
            ...params
        });
    }
}
