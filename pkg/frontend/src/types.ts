// Wire types mirroring the service's scene serialization.

export interface ImageRefData {
  query: string;
  path: string;
  width: number;
  height: number;
  provider: string;
  missing: boolean;
}

export interface SceneNodeData {
  frame_id: string;
  kind: 'entity' | 'action';
  label: string;
  x: number;
  y: number;
  width: number;
  height: number;
  is_group: boolean;
  is_main: boolean;
  image?: ImageRefData;
}

export interface SceneEdgeData {
  source: string;
  target: string;
  kind: string;
  label: string;
}

export interface SceneData {
  nodes: SceneNodeData[];
  edges: SceneEdgeData[];
}

export interface ScenePayload {
  depth: number;
  label: string;
  path: string[];
  scene: SceneData;
}

export interface SessionCreated extends ScenePayload {
  session_id: string;
}

export interface PanelState {
  imageType: 'all' | 'clipart' | 'lineart';
  sizeMode: 'all' | 'auto' | 'small';
  conceptCombination: boolean;
  groupThreshold: number;
  seed: number;
}

export const DEFAULT_PANEL: PanelState = {
  imageType: 'all',
  sizeMode: 'all',
  conceptCombination: false,
  groupThreshold: 6,
  seed: 0,
};

/** Server-side engine config derived from the parameter panel. */
export function panelToConfig(panel: PanelState): Record<string, unknown> {
  return {
    g_th: panel.groupThreshold,
    seed: panel.seed,
    query: {
      mode: panel.conceptCombination ? 'cc' : 'direct',
      type_filter: panel.imageType,
      size_mode: panel.sizeMode,
    },
  };
}
