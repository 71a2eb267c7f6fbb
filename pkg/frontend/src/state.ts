// Viewer state machine. The state is a pure function of the server response
// history: the client never re-lays-out or re-groups anything. One mutation
// request may be in flight at a time.

import { ApiClient, ApiError } from './api.js';
import { DEFAULT_PANEL, panelToConfig } from './types.js';
import type { PanelState, SceneData, ScenePayload } from './types.js';

export interface Crumb {
  label: string;
  depth: number;
}

export interface ViewState {
  sessionId: string | null;
  documentId: string | null;
  scene: SceneData | null;
  /** Raw body of the response the current scene came from. */
  lastResponseRaw: string | null;
  breadcrumbs: Crumb[];
  panel: PanelState;
  busy: boolean;
  notice: string | null;
}

export class ViewerController {
  state: ViewState;

  constructor(
    private api: ApiClient,
    private onChange: (state: ViewState) => void = () => {},
    panel: PanelState = DEFAULT_PANEL,
  ) {
    this.state = {
      sessionId: null,
      documentId: null,
      scene: null,
      lastResponseRaw: null,
      breadcrumbs: [],
      panel,
      busy: false,
      notice: null,
    };
  }

  private emit(): void {
    this.onChange(this.state);
  }

  private applyScene(raw: string, payload: ScenePayload): void {
    this.state.scene = payload.scene;
    this.state.lastResponseRaw = raw;
  }

  get canGoBack(): boolean {
    return this.state.breadcrumbs.length >= 2;
  }

  setPanel(panel: Partial<PanelState>): void {
    this.state.panel = { ...this.state.panel, ...panel };
    this.emit();
  }

  /** Upload a SEPT document and open a session with the panel's parameters. */
  async openDocument(septJson: string): Promise<void> {
    if (this.state.busy) return;
    this.state.busy = true;
    this.state.notice = null;
    this.emit();
    try {
      const doc = await this.api.uploadDocument(septJson);
      const created = await this.api.createSession(
        doc.data.document_id, panelToConfig(this.state.panel));
      this.state.documentId = doc.data.document_id;
      this.state.sessionId = created.data.session_id;
      this.state.breadcrumbs = [{ label: created.data.label, depth: 0 }];
      this.applyScene(created.raw, created.data);
    } catch (err) {
      this.state.notice = err instanceof ApiError ? err.message : String(err);
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }

  /** Drill into a group frame. Non-group clicks issue no request; a second
   * click while a request is in flight is ignored. */
  async onExpand(frameId: string): Promise<void> {
    const { sessionId, scene } = this.state;
    if (!sessionId || !scene) return;
    const node = scene.nodes.find((n) => n.frame_id === frameId);
    if (!node || !node.is_group) return;
    if (this.state.busy) return;
    this.state.busy = true;
    this.state.notice = null;
    this.emit();
    try {
      const response = await this.api.expand(sessionId, frameId);
      this.state.breadcrumbs = [
        ...this.state.breadcrumbs,
        { label: response.data.label, depth: response.data.depth },
      ];
      this.applyScene(response.raw, response.data);
    } catch (err) {
      // 409: expand rejected server-side; surface a toast, keep the state
      this.state.notice = err instanceof ApiError ? err.message : String(err);
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }

  /** Pop to the parent level; a no-op at the root (the control is disabled). */
  async onBack(): Promise<void> {
    const { sessionId } = this.state;
    if (!sessionId || !this.canGoBack || this.state.busy) return;
    this.state.busy = true;
    this.state.notice = null;
    this.emit();
    try {
      const response = await this.api.back(sessionId);
      this.state.breadcrumbs = this.state.breadcrumbs.slice(0, -1);
      this.applyScene(response.raw, response.data);
    } catch (err) {
      this.state.notice = err instanceof ApiError ? err.message : String(err);
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }
}
