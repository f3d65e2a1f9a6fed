import { ApiClient } from "./client";
import { renderApp } from "./render";
import { ConsoleStore } from "./state";

/**
 * Wire the console into a root element. Event delegation keeps listeners on
 * the root, so re-renders never orphan handlers.
 */
export function mount(root: HTMLElement, client: ApiClient): ConsoleStore {
  const store = new ConsoleStore(client);

  const rerender = () => {
    renderApp(root, store.getState());
    // Keep keyboard focus on the input while chatting.
    const input = root.querySelector<HTMLTextAreaElement>("#response");
    if (input !== null && !input.disabled) input.focus();
  };
  store.subscribe(rerender);
  rerender();

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.id === "start") {
      void store.startInterview();
    } else if (target.id === "retry") {
      void store.retryLastSend();
    }
  });

  const submitCurrent = () => {
    const input = root.querySelector<HTMLTextAreaElement>("#response");
    if (input === null) return;
    const text = input.value;
    if (text.trim() === "") return; // blocked client-side
    void store.sendResponse(text);
  };

  root.addEventListener("submit", (event) => {
    const target = event.target as HTMLElement;
    if (target.id === "composer") {
      event.preventDefault();
      submitCurrent();
    }
  });

  root.addEventListener("keydown", (event) => {
    const key = event as KeyboardEvent;
    const target = event.target as HTMLElement;
    if (target.id === "response" && key.key === "Enter" && !key.shiftKey) {
      event.preventDefault();
      submitCurrent();
    }
  });

  return store;
}
