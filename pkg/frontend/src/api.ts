import type {
  CheckLayoutInfo,
  CheckRequest,
  DatasetInfo,
  FamilyInfo,
  FilterSpec,
  FitRequest,
  FitResponse,
  ApiErrorPayload,
  TransformSpec,
} from "./types.js";

export class ApiError extends Error {
  code: string;
  detail: Record<string, unknown>;

  constructor(payload: ApiErrorPayload, public status: number) {
    super(payload.message);
    this.code = payload.code;
    this.detail = payload.detail ?? {};
  }

  /** Character position for parse errors, when the service reported one. */
  get position(): number | null {
    const p = this.detail["position"];
    return typeof p === "number" ? p : null;
  }
}

/** Everything the workbench needs from the service; tests stub this. */
export interface WorkbenchClient {
  listDatasets(): Promise<DatasetInfo[]>;
  listFamilies(): Promise<FamilyInfo[]>;
  runPipeline(datasetId: string, filters: FilterSpec[],
              transforms: TransformSpec[]): Promise<DatasetInfo>;
  fit(body: FitRequest): Promise<FitResponse>;
  check(body: CheckRequest, signal?: AbortSignal): Promise<CheckLayoutInfo>;
}

export class Client implements WorkbenchClient {
  constructor(private base: string) {}

  private async request<T>(method: string, path: string, body?: unknown,
                           signal?: AbortSignal): Promise<T> {
    const res = await fetch(this.base + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
      signal,
    });
    const text = await res.text();
    const payload = text ? JSON.parse(text) : null;
    if (!res.ok) {
      throw new ApiError(payload as ApiErrorPayload, res.status);
    }
    return payload as T;
  }

  listDatasets(): Promise<DatasetInfo[]> {
    return this.request("GET", "/datasets");
  }

  listFamilies(): Promise<FamilyInfo[]> {
    return this.request("GET", "/families");
  }

  async uploadDataset(name: string, csv: string): Promise<DatasetInfo> {
    const res = await fetch(
      `${this.base}/datasets?name=${encodeURIComponent(name)}`,
      { method: "POST", headers: { "Content-Type": "text/csv" }, body: csv });
    const payload = await res.json();
    if (!res.ok) throw new ApiError(payload, res.status);
    return payload as DatasetInfo;
  }

  runPipeline(datasetId: string, filters: FilterSpec[],
              transforms: TransformSpec[]): Promise<DatasetInfo> {
    return this.request("POST", `/datasets/${datasetId}/pipeline`,
                        { filters, transforms });
  }

  fit(body: FitRequest): Promise<FitResponse> {
    return this.request("POST", "/fit", body);
  }

  check(body: CheckRequest, signal?: AbortSignal): Promise<CheckLayoutInfo> {
    return this.request("POST", "/check", body, signal);
  }
}
