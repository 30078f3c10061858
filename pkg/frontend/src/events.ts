import type { RunEvent } from "./types.js";

/**
 * Parse a complete server-sent-event stream as emitted by the run events
 * endpoint: one JSON payload per `data:` field, events separated by blank
 * lines, ending after run_finished.
 */
export function parseSseStream(text: string): RunEvent[] {
  const events: RunEvent[] = [];
  for (const block of text.split("\n\n")) {
    const dataLines = block
      .split("\n")
      .filter((line) => line.startsWith("data:"))
      .map((line) => line.slice(5).replace(/^ /, ""));
    if (dataLines.length === 0) continue;
    events.push(JSON.parse(dataLines.join("\n")) as RunEvent);
  }
  return events;
}

export interface EventSubscription {
  close(): void;
}

/**
 * Stream live run events. The server replays the full buffer, so subscribing
 * after completion still yields every event. Closes itself on run_finished.
 */
export function subscribeEvents(
  url: string,
  onEvent: (event: RunEvent) => void,
  onError?: (err: Event) => void,
): EventSubscription {
  const source = new EventSource(url);
  source.onmessage = (message: MessageEvent<string>) => {
    const event = JSON.parse(message.data) as RunEvent;
    onEvent(event);
    if (event.event === "run_finished") {
      source.close();
    }
  };
  source.onerror = (err: Event) => {
    source.close();
    if (onError) onError(err);
  };
  return { close: () => source.close() };
}
