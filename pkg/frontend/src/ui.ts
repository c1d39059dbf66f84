// DOM layer: renders a SessionView and wires controls to session actions.
// Choice buttons exist exactly while a choice request is outstanding and are
// disabled as soon as one of them has been clicked.

import { Mode } from "./protocol.js";
import { UiSession } from "./session.js";

const SAMPLE = `med (+) eng (+) eco.
tuition(40k) :- med.
tuition(30k) :- eng.
tuition(20k) :- eco.
`;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function mount(root: HTMLElement, session: UiSession): void {
  const status = el("span", "status", "connecting");

  const program = el("textarea", "program");
  program.id = "program";
  program.rows = 8;
  program.value = SAMPLE;

  const goal = el("input", "goal");
  goal.id = "goal";
  goal.type = "text";
  goal.placeholder = "tuition(X)";

  const mode = el("select", "mode");
  mode.id = "mode";
  for (const value of ["ex", "pv"] as Mode[]) {
    const option = el("option", undefined, value);
    option.value = value;
    mode.append(option);
  }

  const run = el("button", "run", "run");
  run.id = "run";
  const next = el("button", "next", "next");
  next.id = "next";
  const stop = el("button", "stop", "stop");
  stop.id = "stop";

  const items = el("ul", "items");
  items.id = "items";
  const choices = el("div", "choices");
  choices.id = "choices";
  const choiceOrigin = el("div", "choice-origin");
  const answers = el("ul", "answers");
  answers.id = "answers";
  const log = el("pre", "log");
  log.id = "log";

  run.addEventListener("click", () => {
    session.load(program.value, "<editor>");
    const text = goal.value.trim() || goal.placeholder;
    session.query(text, mode.value as Mode);
  });
  next.addEventListener("click", () => session.next());
  stop.addEventListener("click", () => session.stop());

  const controls = el("div", "controls");
  controls.append(goal, mode, run, next, stop, status);
  root.append(program, controls, choiceOrigin, choices, answers, items, log);

  const render = () => {
    const view = session.view();
    status.textContent = `${view.status} / ${view.runStatus}`;
    next.disabled = view.runStatus !== "done";
    stop.disabled = view.runStatus === "idle";

    choices.replaceChildren();
    const pending = view.pendingChoice;
    choiceOrigin.textContent = pending ? `choice at ${pending.origin}` : "";
    if (pending) {
      pending.alternatives.forEach((label, index) => {
        const button = el("button", "choice", label);
        button.disabled = pending.sent;
        button.addEventListener("click", () => session.choose(index));
        choices.append(button);
      });
    }

    answers.replaceChildren();
    for (const line of view.answers) answers.append(el("li", "answer", line));
    if (view.verdict !== null) {
      answers.append(el("li", "verdict", view.verdict));
    }

    items.replaceChildren();
    for (const item of view.items) items.append(el("li", "item", item));

    log.textContent = view.log.join("\n");
  };

  session.subscribe(render);
  render();
}
