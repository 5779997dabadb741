/** Payload shapes, mirroring the API's JSON field for field. */

export type Role = "DEAN" | "HR_STAFF";

export interface Session {
  token: string;
  role: Role;
  username: string;
}

export interface BucketCount {
  label: string;
  count: number;
}

export interface Distribution {
  entity: string;
  dimension: string;
  title: string;
  reference_date: string;
  buckets: BucketCount[];
  total: number;
}

export interface DrillDown {
  entity: string;
  dimension: string;
  title: string;
  reference_date: string;
  bucket: string;
  count: number;
  records: Record<string, string | null>[];
}

export interface CatalogEntry {
  entity: string;
  dimension: string;
  title: string;
}

export interface DimensionEntry {
  code: string;
  label: string;
  applicability: "lecturer" | "employee" | "both";
}

export interface DimensionCatalog {
  statuses: DimensionEntry[];
  departments: DimensionEntry[];
  positions: DimensionEntry[];
  education_levels: DimensionEntry[];
}

export interface FieldDetail {
  field: string;
  reason: string;
  message: string;
}

export interface ErrorBody {
  code: string;
  message: string;
  details?: FieldDetail[];
}

export interface FileLoadStats {
  file: string;
  checksum: string;
  parsed: number;
  inserted: number;
  updated: number;
  unchanged: number;
  quarantined: number;
  error: string | null;
  quarantined_rows: {
    row_number: number;
    reason: string;
    detail: string;
    violations: FieldDetail[];
    values: Record<string, string>;
  }[];
}

export interface LoadRun {
  run_id: number;
  started_at: string;
  finished_at: string;
  status: string;
  error: string | null;
  files: FileLoadStats[];
  totals: {
    parsed: number;
    inserted: number;
    updated: number;
    unchanged: number;
    quarantined: number;
  };
}
