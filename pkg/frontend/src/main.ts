import { ServiceClient } from "./api";
import { render, type Mounts } from "./render";
import { Configurator } from "./state";
import type { AggregateParams, ModelDoc } from "./types";

function mount(id: string): HTMLElement {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node;
}

const mounts: Mounts = {
    banner: mount("banner"),
    components: mount("components"),
    excellence: mount("excellence"),
    violations: mount("violations"),
    bestCompletion: mount("best-completion"),
    pareto: mount("pareto"),
    basket: mount("basket"),
    aggregation: mount("aggregation")
};

const app = new Configurator(new ServiceClient(""), window.localStorage, () =>
    render(app, mounts)
);

const modelInput = mount("model-input") as unknown as HTMLTextAreaElement;

mount("load-sample").onclick = async () => {
    const response = await fetch("./sample-model.json");
    const doc = (await response.json()) as ModelDoc;
    modelInput.value = JSON.stringify(doc, null, 2);
    await app.loadModel(doc);
};

mount("load-model").onclick = async () => {
    try {
        await app.loadModel(JSON.parse(modelInput.value) as ModelDoc);
    } catch (err) {
        window.alert(`could not parse model JSON: ${err}`);
    }
};

mount("clear-selection").onclick = () => void app.clearSelection();
mount("explore-pareto").onclick = () => void app.explorePareto();

mount("run-aggregate").onclick = () => {
    const strategy = (mount("agg-strategy") as unknown as HTMLSelectElement).value;
    const lambda = Number((mount("agg-lambda") as unknown as HTMLInputElement).value) || 1;
    const budget = Number((mount("agg-budget") as unknown as HTMLInputElement).value) || 0;
    const solver = (mount("agg-solver") as unknown as HTMLSelectElement).value as
        | "greedy"
        | "exact";
    let extra: AggregateParams = {};
    const raw = (mount("agg-extra") as unknown as HTMLTextAreaElement).value.trim();
    if (raw) {
        try {
            extra = JSON.parse(raw) as AggregateParams;
        } catch (err) {
            window.alert(`could not parse extra parameters: ${err}`);
            return;
        }
    }
    void app.aggregateBasket(strategy, { lambda, budget, solver, ...extra });
};

render(app, mounts);
