import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { ViewerController } from '../src/state.js';
import type { SceneData } from '../src/types.js';

function sceneWith(groups: string[], plain: string[] = []): SceneData {
  const mk = (id: string, isGroup: boolean) => ({
    frame_id: id, kind: 'action' as const, label: id, x: 0, y: 0,
    width: 40, height: 24, is_group: isGroup, is_main: false,
  });
  return {
    nodes: [...groups.map((g) => mk(g, true)), ...plain.map((p) => mk(p, false))],
    edges: [],
  };
}

interface FakeCall {
  path: string;
  resolve: (response: Response) => void;
}

/** fetch double with manual resolution so in-flight behavior is observable */
function fakeServer() {
  const calls: FakeCall[] = [];
  const fetchImpl = (url: string): Promise<Response> =>
    new Promise((resolve) => {
      calls.push({ path: url, resolve });
    });
  const respond = (index: number, status: number, body: unknown) => {
    calls[index].resolve(new Response(JSON.stringify(body), { status }));
  };
  return { calls, fetchImpl, respond };
}

function readyController(server: ReturnType<typeof fakeServer>, scene: SceneData) {
  const controller = new ViewerController(new ApiClient('http://test', server.fetchImpl));
  controller.state.sessionId = 'sid';
  controller.state.scene = scene;
  controller.state.breadcrumbs = [{ label: 'root', depth: 0 }];
  return controller;
}

const childPayload = {
  depth: 1, label: 'Work', path: ['g1'], scene: sceneWith([], ['detail']),
};

describe('ViewerController.onExpand', () => {
  it('expands a group frame and pushes a breadcrumb', async () => {
    const server = fakeServer();
    const controller = readyController(server, sceneWith(['g1']));
    const pending = controller.onExpand('g1');
    expect(server.calls).toHaveLength(1);
    expect(server.calls[0].path).toContain('/sessions/sid/expand');
    server.respond(0, 200, childPayload);
    await pending;
    expect(controller.state.breadcrumbs.map((c) => c.label)).toEqual(['root', 'Work']);
    expect(controller.state.scene?.nodes.map((n) => n.frame_id)).toEqual(['detail']);
  });

  it('issues no request for a non-group frame', async () => {
    const server = fakeServer();
    const controller = readyController(server, sceneWith(['g1'], ['plain']));
    await controller.onExpand('plain');
    expect(server.calls).toHaveLength(0);
  });

  it('rapid double-click issues a single request', async () => {
    const server = fakeServer();
    const controller = readyController(server, sceneWith(['g1']));
    const first = controller.onExpand('g1');
    const second = controller.onExpand('g1');  // in flight: ignored
    expect(server.calls).toHaveLength(1);
    server.respond(0, 200, childPayload);
    await Promise.all([first, second]);
    expect(server.calls).toHaveLength(1);
    expect(controller.state.breadcrumbs).toHaveLength(2);
  });

  it('keeps state and shows a toast on a 409', async () => {
    const server = fakeServer();
    const scene = sceneWith(['g1']);
    const controller = readyController(server, scene);
    const pending = controller.onExpand('g1');
    server.respond(0, 409, { error: 'not a group frame' });
    await pending;
    expect(controller.state.scene).toEqual(scene);
    expect(controller.state.breadcrumbs).toHaveLength(1);
    expect(controller.state.notice).toContain('not a group frame');
  });
});

describe('ViewerController.onBack', () => {
  it('is disabled at the root: no request, state unchanged', async () => {
    const server = fakeServer();
    const controller = readyController(server, sceneWith(['g1']));
    expect(controller.canGoBack).toBe(false);
    await controller.onBack();
    expect(server.calls).toHaveLength(0);
    expect(controller.state.breadcrumbs).toHaveLength(1);
  });

  it('pops a breadcrumb on success', async () => {
    const server = fakeServer();
    const controller = readyController(server, sceneWith([]));
    controller.state.breadcrumbs = [{ label: 'root', depth: 0 }, { label: 'Work', depth: 1 }];
    const pending = controller.onBack();
    expect(server.calls[0].path).toContain('/sessions/sid/back');
    server.respond(0, 200, { depth: 0, label: 'root', path: [], scene: sceneWith(['g1']) });
    await pending;
    expect(controller.state.breadcrumbs.map((c) => c.label)).toEqual(['root']);
    expect(controller.canGoBack).toBe(false);
  });
});

describe('breadcrumbs mirror the navigation stack', () => {
  it('stays consistent over a scripted expand/back walk', async () => {
    const server = fakeServer();
    const controller = readyController(server, sceneWith(['g1']));
    let call = 0;

    const expand = async (gid: string, label: string, depth: number) => {
      const pending = controller.onExpand(gid);
      server.respond(call++, 200, {
        depth, label, path: [], scene: sceneWith(['g1']),
      });
      await pending;
    };
    const back = async (label: string, depth: number) => {
      const pending = controller.onBack();
      server.respond(call++, 200, {
        depth, label, path: [], scene: sceneWith(['g1']),
      });
      await pending;
    };

    await expand('g1', 'A', 1);
    await expand('g1', 'B', 2);
    expect(controller.state.breadcrumbs).toHaveLength(3);
    await back('A', 1);
    expect(controller.state.breadcrumbs).toHaveLength(2);
    await expand('g1', 'C', 2);
    expect(controller.state.breadcrumbs.map((c) => c.label)).toEqual(['root', 'A', 'C']);
  });
});
