export type PlayerToken = "V" | "H";

export interface MoveRecord {
  player: PlayerToken;
  cells: [number, number][];
}

export interface SessionRecord {
  id: string;
  topology: string;
  width: number;
  length: number;
  engine_side: PlayerToken | null;
  recipe: string;
  moves: MoveRecord[];
  to_move: PlayerToken;
  status: "open" | "finished";
  winner: PlayerToken | null;
}

export interface AtlasCell {
  topology: string;
  width: number;
  length: number;
  outcomes: string[];
  token: string;
  provenance: "searched" | "asserted" | "derived" | "none";
  known: boolean;
}

export interface AtlasResponse {
  topology: string;
  max_width: number;
  max_length: number;
  cells: AtlasCell[];
}

export interface TraceStep {
  rule: string;
  before: string[];
  after: string[];
  details: Record<string, unknown>;
  premises: TraceNode[];
}

export interface Support {
  rule: string;
  parts: number[];
  outcomes: string[];
}

export interface TraceNode {
  key: string;
  outcomes: string[];
  steps: TraceStep[];
  supports?: Support[];
}

export type Cell = [number, number];
