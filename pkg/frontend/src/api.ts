/**
 * API client. All numbers shown anywhere in the UI come from these payloads;
 * the client never aggregates or recomputes anything.
 *
 * Role guard lives here, at the network layer: while a DEAN session is
 * active, any non-GET request (other than login) throws before fetch is
 * called, so a dean can never emit a mutation over the wire no matter what
 * the view layer does.
 */

import type {
  CatalogEntry,
  DimensionCatalog,
  Distribution,
  DrillDown,
  ErrorBody,
  LoadRun,
  Role,
  Session,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ErrorBody | null,
  ) {
    super(body?.message ?? `request failed with status ${status}`);
  }
}

export class MutationBlockedError extends Error {
  constructor() {
    super("the DEAN role is read-only; mutation was blocked client-side");
  }
}

export class ApiClient {
  session: Session | null = null;

  constructor(private baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    if (method !== "GET" && path !== "/api/login" && this.session?.role === "DEAN") {
      throw new MutationBlockedError();
    }
    const headers: Record<string, string> = {};
    if (this.session) headers["Authorization"] = `Bearer ${this.session.token}`;
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      payload = null;
    }
    if (!response.ok) throw new ApiError(response.status, payload as ErrorBody | null);
    return payload as T;
  }

  private withRef(path: string, ref: string | null): string {
    return ref ? `${path}?ref=${encodeURIComponent(ref)}` : path;
  }

  async login(username: string, password: string): Promise<Session> {
    const result = await this.request<{ token: string; role: Role }>("POST", "/api/login", {
      username,
      password,
    });
    this.session = { token: result.token, role: result.role, username };
    return this.session;
  }

  logout(): void {
    this.session = null;
  }

  dashboard(ref: string | null): Promise<Distribution[]> {
    return this.request("GET", this.withRef("/api/dashboard", ref));
  }

  reportCatalog(): Promise<CatalogEntry[]> {
    return this.request("GET", "/api/reports");
  }

  report(entity: string, dimension: string, ref: string | null): Promise<Distribution> {
    return this.request("GET", this.withRef(`/api/reports/${entity}/${dimension}`, ref));
  }

  drillDown(
    entity: string,
    dimension: string,
    bucket: string,
    ref: string | null,
  ): Promise<DrillDown> {
    const encoded = encodeURIComponent(bucket);
    return this.request("GET", this.withRef(`/api/reports/${entity}/${dimension}/${encoded}`, ref));
  }

  dimensions(): Promise<DimensionCatalog> {
    return this.request("GET", "/api/dimensions");
  }

  loads(limit = 20): Promise<LoadRun[]> {
    return this.request("GET", `/api/loads?limit=${limit}`);
  }

  saveRecord(
    entity: "lecturer" | "employee",
    record: Record<string, string | null>,
    replace: boolean,
  ): Promise<Record<string, string | null>> {
    const path = entity === "lecturer" ? "/api/lecturers" : "/api/employees";
    return this.request(replace ? "PUT" : "POST", path, record);
  }

  runEtl(): Promise<LoadRun> {
    return this.request("POST", "/api/etl/run");
  }
}
