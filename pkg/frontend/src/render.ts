// DOM rendering: state in, elements out. No engine math here - every figure
// on screen is read straight out of a service response held in the state.

import type { Configurator } from "./state";
import type { Selection, SolutionOut } from "./types";

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
}

function selectionLabel(selection: Selection): string {
    return Object.keys(selection)
        .sort()
        .map((c) => selection[c])
        .join(" * ");
}

function renderComponents(app: Configurator, root: HTMLElement): void {
    const { model, selection, disabled } = app.state;
    root.replaceChildren();
    if (!model) {
        root.append(el("p", "hint", "Load a model to start configuring."));
        return;
    }
    for (const component of model.components) {
        const panel = el("section", "component-panel");
        panel.dataset.component = component.id;
        panel.append(el("h3", undefined, `${component.label} (${component.id})`));
        const chips = el("div", "chips");
        for (const alt of component.alternatives) {
            const chip = el("button", "chip", alt.label);
            chip.dataset.da = alt.id;
            chip.append(el("span", "priority-badge", String(alt.priority)));
            if (selection[component.id] === alt.id) chip.classList.add("picked");
            const conflict = disabled.get(alt.id);
            if (conflict) {
                chip.classList.add("disabled");
                chip.disabled = true;
                chip.title = `incompatible with ${conflict.conflictsWith.join(", ")}`;
            } else {
                chip.onclick = () => void app.pickAlternative(component.id, alt.id);
            }
            chips.append(chip);
        }
        panel.append(chips);
        root.append(panel);
    }
}

function renderExcellence(app: Configurator, root: HTMLElement): void {
    const { evaluation, model } = app.state;
    root.replaceChildren();
    if (!evaluation || !model) return;
    const gauge = el("div", "w-gauge");
    gauge.append(el("span", "w-label", "w"));
    const value = el("span", "w-value", String(evaluation.w));
    gauge.append(value);
    const meter = el("div", "w-meter");
    const fill = el("div", "w-fill");
    fill.style.width = `${(100 * evaluation.w) / Math.max(1, model.compatScaleMax)}%`;
    meter.append(fill);
    gauge.append(meter);
    root.append(gauge);

    const histogram = el("div", "n-histogram");
    evaluation.n.forEach((count, index) => {
        const bar = el("div", "n-bar");
        bar.dataset.priority = String(index + 1);
        const column = el("div", "n-column");
        column.style.height = `${12 * count + 2}px`;
        bar.append(column);
        bar.append(el("span", "n-count", String(count)));
        bar.append(el("span", "n-priority", `r${index + 1}`));
        histogram.append(bar);
    });
    root.append(histogram);
}

function renderViolations(app: Configurator, root: HTMLElement): void {
    root.replaceChildren();
    const evaluation = app.state.evaluation;
    if (!evaluation || evaluation.violations.length === 0) return;
    const list = el("ul", "violations");
    for (const violation of evaluation.violations) {
        list.append(el("li", `violation violation-${violation.kind}`, violation.message));
    }
    root.append(list);
}

function renderBestCompletion(app: Configurator, root: HTMLElement): void {
    root.replaceChildren();
    const best = app.state.evaluation?.bestCompletion;
    if (!best) return;
    const row = el("div", "best-completion");
    row.append(el("span", "hint", "recommended finish:"));
    row.append(el("span", "best-label", selectionLabel(best.selection)));
    row.append(el("span", "best-score", `(${best.w}; ${best.n.join(",")})`));
    const apply = el("button", "apply-best", "apply");
    apply.onclick = () => void app.loadSolution(best.selection);
    row.append(apply);
    root.append(row);
}

function renderPareto(app: Configurator, root: HTMLElement): void {
    root.replaceChildren();
    const { pareto, paretoMessage } = app.state;
    if (paretoMessage) {
        root.append(el("p", "pareto-message", paretoMessage));
        return;
    }
    if (!pareto) return;
    const groups = new Map<string, SolutionOut[]>();
    for (const solution of pareto) {
        const key = `(${solution.w}; ${solution.n.join(",")})`;
        const bucket = groups.get(key) ?? [];
        bucket.push(solution);
        groups.set(key, bucket);
    }
    for (const [key, bucket] of groups) {
        const group = el("div", "pareto-group");
        group.append(el("h4", "pareto-vector", key));
        for (const solution of bucket) {
            const row = el("button", "pareto-solution", selectionLabel(solution.selection));
            row.onclick = () => void app.loadSolution(solution.selection);
            group.append(row);
        }
        root.append(group);
    }
}

function renderBasket(app: Configurator, root: HTMLElement): void {
    root.replaceChildren();
    const { basket } = app.state;
    const header = el("div", "basket-header");
    const add = el("button", "basket-add", "save current as prototype");
    add.disabled = !app.isSelectionFull();
    add.onclick = () => app.basketAdd();
    header.append(add);
    if (basket.length > 0) {
        const clear = el("button", "basket-clear", "clear basket");
        clear.onclick = () => app.basketClear();
        header.append(clear);
    }
    root.append(header);
    basket.forEach((prototype, index) => {
        const row = el("div", "basket-item");
        row.append(el("span", "basket-label", selectionLabel(prototype)));
        const remove = el("button", "basket-remove", "remove");
        remove.onclick = () => app.basketRemove(index);
        row.append(remove);
        root.append(row);
    });
}

function renderAggregation(app: Configurator, root: HTMLElement): void {
    root.replaceChildren();
    const view = app.state.aggregation;
    if (!view) return;
    const { result, excellence } = view;
    root.append(el("h4", undefined, `strategy: ${result.strategy}`));

    if ("kernel" in result) {
        const kernelRow = el("div", "kernel-row");
        kernelRow.append(el("span", "hint", "kernel:"));
        for (const componentId of Object.keys(result.kernel).sort()) {
            const chip = el("span", "kernel-chip", result.kernel[componentId]);
            chip.dataset.component = componentId;
            kernelRow.append(chip);
        }
        root.append(kernelRow);
    }
    if ("superstructure" in result) {
        for (const [componentId, das] of Object.entries(result.superstructure)) {
            const row = el("div", "superstructure-row");
            row.append(el("span", "hint", `${componentId}:`));
            for (const da of das) {
                const chip = el("span", "superstructure-chip", da);
                if (!result.remaining[componentId]?.includes(da)) {
                    chip.classList.add("deleted");
                }
                row.append(chip);
            }
            root.append(row);
        }
    }
    if ("selection" in result && result.selection) {
        const row = el("div", "aggregate-result");
        row.append(el("span", "hint", "result:"));
        row.append(el("span", "aggregate-selection", selectionLabel(result.selection)));
        if (excellence) {
            row.append(
                el("span", "aggregate-score", `(${excellence.w}; ${excellence.n.join(",")})`)
            );
        }
        root.append(row);
    }
    if ("totalCost" in result) {
        root.append(
            el("p", "aggregate-totals", `cost ${result.totalCost}, profit ${result.totalProfit}`)
        );
    }
    if ("totalDistance" in result) {
        root.append(
            el(
                "p",
                "aggregate-totals",
                `prototype ${result.index + 1}, total distance ${result.totalDistance}`
            )
        );
    }
}

function renderBanner(app: Configurator, root: HTMLElement): void {
    root.replaceChildren();
    if (!app.state.banner) return;
    const banner = el("div", "banner", app.state.banner);
    const dismiss = el("button", "banner-dismiss", "dismiss");
    dismiss.onclick = () => app.dismissBanner();
    banner.append(dismiss);
    root.append(banner);
}

export interface Mounts {
    banner: HTMLElement;
    components: HTMLElement;
    excellence: HTMLElement;
    violations: HTMLElement;
    bestCompletion: HTMLElement;
    pareto: HTMLElement;
    basket: HTMLElement;
    aggregation: HTMLElement;
}

export function render(app: Configurator, mounts: Mounts): void {
    renderBanner(app, mounts.banner);
    renderComponents(app, mounts.components);
    renderExcellence(app, mounts.excellence);
    renderViolations(app, mounts.violations);
    renderBestCompletion(app, mounts.bestCompletion);
    renderPareto(app, mounts.pareto);
    renderBasket(app, mounts.basket);
    renderAggregation(app, mounts.aggregation);
}
