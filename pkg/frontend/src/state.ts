// Configurator state machine. Every displayed figure (w, n, costs, profits,
// distances) is copied verbatim from a service response; this module never
// recomputes engine math. Concurrent evaluations resolve last-write-wins via
// a monotonically increasing request sequence.

import { ApiError, ServiceClient } from "./api";
import type {
    AggregateParams,
    AggregateResult,
    EvaluateResponse,
    ModelDoc,
    Selection,
    SolutionOut
} from "./types";

export interface DisabledInfo {
    conflictsWith: string[];
}

export interface AggregationView {
    result: AggregateResult;
    excellence: EvaluateResponse | null;
}

export interface ConfiguratorState {
    model: ModelDoc | null;
    modelId: string | null;
    selection: Selection;
    evaluation: EvaluateResponse | null;
    disabled: Map<string, DisabledInfo>;
    pareto: SolutionOut[] | null;
    paretoMessage: string | null;
    basket: Selection[];
    aggregation: AggregationView | null;
    banner: string | null;
    busy: boolean;
}

const BASKET_KEY = "morphshop.basket";

function canonical(selection: Selection): string {
    return JSON.stringify(
        Object.keys(selection)
            .sort()
            .map((key) => [key, selection[key]])
    );
}

export class Configurator {
    readonly state: ConfiguratorState;

    private seq = 0;
    private appliedSeq = 0;
    private evaluateCache = new Map<string, EvaluateResponse>();

    constructor(
        private client: ServiceClient,
        private storage: Storage | null = null,
        private onChange: () => void = () => {}
    ) {
        this.state = {
            model: null,
            modelId: null,
            selection: {},
            evaluation: null,
            disabled: new Map(),
            pareto: null,
            paretoMessage: null,
            basket: this.restoreBasket(),
            aggregation: null,
            banner: null,
            busy: false
        };
    }

    private emit(): void {
        this.onChange();
    }

    private fail(err: unknown): void {
        this.state.banner =
            err instanceof ApiError ? `${err.error}: ${err.detail}` : String(err);
        this.emit();
    }

    dismissBanner(): void {
        this.state.banner = null;
        this.emit();
    }

    private restoreBasket(): Selection[] {
        if (!this.storage) return [];
        try {
            const raw = this.storage.getItem(BASKET_KEY);
            return raw ? (JSON.parse(raw) as Selection[]) : [];
        } catch {
            return [];
        }
    }

    private persistBasket(): void {
        this.storage?.setItem(BASKET_KEY, JSON.stringify(this.state.basket));
    }

    async loadModel(doc: ModelDoc): Promise<void> {
        this.state.busy = true;
        this.emit();
        try {
            const modelId = await this.client.uploadModel(doc);
            this.state.model = doc;
            this.state.modelId = modelId;
            this.state.selection = {};
            this.state.pareto = null;
            this.state.paretoMessage = null;
            this.state.aggregation = null;
            this.state.banner = null;
            this.evaluateCache.clear();
            await this.refresh();
        } catch (err) {
            this.fail(err);
        } finally {
            this.state.busy = false;
            this.emit();
        }
    }

    async pickAlternative(componentId: string, daId: string): Promise<void> {
        if (!this.state.modelId) return;
        if (this.state.selection[componentId] === daId) {
            delete this.state.selection[componentId];
        } else {
            this.state.selection[componentId] = daId;
        }
        await this.refresh();
    }

    async clearSelection(): Promise<void> {
        this.state.selection = {};
        await this.refresh();
    }

    async loadSolution(selection: Selection): Promise<void> {
        this.state.selection = { ...selection };
        await this.refresh();
    }

    private async evaluateCached(selection: Selection): Promise<EvaluateResponse> {
        const key = canonical(selection);
        const hit = this.evaluateCache.get(key);
        if (hit) return hit;
        const response = await this.client.evaluate(this.state.modelId!, selection);
        this.evaluateCache.set(key, response);
        return response;
    }

    /** Re-evaluate the current selection and the disabled state of every chip. */
    private async refresh(): Promise<void> {
        const model = this.state.model;
        if (!model || !this.state.modelId) return;
        const mySeq = ++this.seq;
        const selection = { ...this.state.selection };
        try {
            const evaluation = await this.evaluateCached(selection);
            const disabled = new Map<string, DisabledInfo>();
            await Promise.all(
                model.components.flatMap((component) =>
                    component.alternatives.map(async (alt) => {
                        if (selection[component.id] === alt.id) return;
                        const candidate = { ...selection, [component.id]: alt.id };
                        const probe = await this.evaluateCached(candidate);
                        const partners = probe.violations
                            .filter(
                                (v) =>
                                    v.kind === "incompatible-pair" &&
                                    v.alternatives.includes(alt.id)
                            )
                            .flatMap((v) => v.alternatives.filter((a) => a !== alt.id));
                        if (partners.length > 0) {
                            disabled.set(alt.id, { conflictsWith: [...new Set(partners)] });
                        }
                    })
                )
            );
            if (mySeq < this.appliedSeq) return; // a newer refresh already landed
            this.appliedSeq = mySeq;
            this.state.evaluation = evaluation;
            this.state.disabled = disabled;
            this.emit();
        } catch (err) {
            if (mySeq >= this.appliedSeq) this.fail(err);
        }
    }

    async explorePareto(node?: string): Promise<void> {
        if (!this.state.modelId) return;
        try {
            this.state.pareto = await this.client.pareto(this.state.modelId, node);
            this.state.paretoMessage = null;
        } catch (err) {
            this.state.pareto = null;
            this.state.paretoMessage =
                err instanceof ApiError ? `${err.error}: ${err.detail}` : String(err);
        }
        this.emit();
    }

    isSelectionFull(): boolean {
        const model = this.state.model;
        if (!model) return false;
        return model.components.every((c) => this.state.selection[c.id] !== undefined);
    }

    basketAdd(): void {
        if (!this.isSelectionFull()) return;
        this.state.basket.push({ ...this.state.selection });
        this.persistBasket();
        this.emit();
    }

    basketRemove(index: number): void {
        this.state.basket.splice(index, 1);
        this.persistBasket();
        this.emit();
    }

    basketClear(): void {
        this.state.basket = [];
        this.persistBasket();
        this.emit();
    }

    async aggregateBasket(strategy: string, params: AggregateParams): Promise<void> {
        if (!this.state.modelId || this.state.basket.length === 0) return;
        try {
            const result = await this.client.aggregate(
                this.state.modelId,
                strategy,
                this.state.basket,
                params
            );
            let excellence: EvaluateResponse | null = null;
            if ("selection" in result && result.selection) {
                excellence = await this.evaluateCached(result.selection);
            }
            this.state.aggregation = { result, excellence };
            this.emit();
        } catch (err) {
            this.fail(err);
        }
    }
}
