// Shapes of the service payloads the configurator consumes.

export interface AlternativeDoc {
    id: string;
    label: string;
    priority: number;
}

export interface ComponentDoc {
    id: string;
    label: string;
    alternatives: AlternativeDoc[];
}

export interface ModelDoc {
    priorityScaleMax: number;
    compatScaleMax: number;
    defaultCompat?: number;
    tree: unknown;
    components: ComponentDoc[];
    compatibility: { a: string; b: string; value: number }[];
}

export type Selection = Record<string, string>;

export interface Violation {
    kind: string;
    message: string;
    componentId: string | null;
    alternatives: string[];
}

export interface SolutionOut {
    selection: Selection;
    w: number;
    n: number[];
}

export interface EvaluateResponse {
    violations: Violation[];
    w: number;
    n: number[];
    bestCompletion: SolutionOut | null;
}

export interface ExtendResult {
    strategy: "extend";
    kernel: Selection;
    counts: Record<string, number>;
    chosenOperations: string[];
    selection: Selection;
    totalCost: number;
    totalProfit: number;
}

export interface NewDesignResult {
    strategy: "newdesign";
    selection: Selection;
    totalCost: number;
    totalProfit: number;
}

export interface MedianResult {
    strategy: "median";
    index: number;
    selection: Selection;
    totalDistance: number;
    distances: number[];
}

export interface CompressResult {
    strategy: "compress";
    superstructure: Record<string, string[]>;
    remaining: Record<string, string[]>;
    deleted: string[];
    gain: number;
    profitLost: number;
}

export type AggregateResult = ExtendResult | NewDesignResult | MedianResult | CompressResult;

export interface AdditionOpInput {
    id: string;
    component: string;
    from: string;
    to: string;
    cost: number;
    profit: number;
}

export interface AggregateParams {
    lambda?: number;
    budget?: number;
    solver?: "greedy" | "exact";
    additionOps?: AdditionOpInput[];
    daCosts?: Record<string, { cost: number; profit: number }>;
    deletionCandidates?: {
        id: string;
        component: string;
        da: string;
        cost: number;
        profit: number;
    }[];
    requiredGain?: number;
}

export interface ServiceError {
    error: string;
    detail: string;
    path?: string | null;
}
