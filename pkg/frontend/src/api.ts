/// Typed client for the studio HTTP API. The UI never computes pixels or
/// metrics itself; everything displayed comes back from these calls.

export interface SlotView {
    slot: number;
    selected: boolean;
    url: string;
}

export interface PopulationView {
    session_id: string;
    generation: number;
    origin: string | null;
    palette: string;
    population_size: number;
    image_size: number;
    slots: SlotView[];
}

export interface NodeDoc {
    innovation: number;
    kind: string;
    activation: string;
}

export interface ConnectionDoc {
    innovation: number;
    source: number;
    target: number;
    weight: number;
    enabled: boolean;
}

export interface GenomeDoc {
    id: string | null;
    parent_id: string | null;
    title: string | null;
    author: string | null;
    palette: string;
    nodes: NodeDoc[];
    connections: ConnectionDoc[];
}

export interface PublishRecordDoc {
    genome_id: string;
    parent_id: string | null;
    title: string;
    author: string;
    created_at: string;
    genome: GenomeDoc;
}

export interface SweepFrame {
    weight: number;
    url: string;
}

export interface SweepView {
    image_id: string;
    connection: number;
    baseline_weight: number;
    baseline_url: string;
    lo: number;
    hi: number;
    step: number;
    size: number;
    frames: SweepFrame[];
    impact: Record<string, number>;
}

export interface LabelDoc {
    name: string;
    color: string;
}

export interface LabelStoreDoc {
    genome_id: string;
    labels: Record<string, LabelDoc>;
}

export class ApiError extends Error {
    constructor(public status: number, detail: string) {
        super(detail);
    }
}

async function expect_json<T>(response: Response): Promise<T> {
    if (!response.ok) {
        let detail = response.statusText;
        try {
            const body = await response.json();
            if (body.detail) detail = String(body.detail);
        } catch {
            // keep the status text
        }
        throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
}

export class ApiClient {
    constructor(public base: string = "") {}

    private url(path: string): string {
        return this.base + path;
    }

    async createSession(body: {
        from: string;
        palette?: string;
        seed?: number;
        population?: number;
    }): Promise<string> {
        const res = await fetch(this.url("/sessions"), {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
        return (await expect_json<{ session_id: string }>(res)).session_id;
    }

    async population(sessionId: string, size = 192): Promise<PopulationView> {
        const res = await fetch(this.url(`/sessions/${sessionId}/population?size=${size}`));
        return expect_json<PopulationView>(res);
    }

    async select(sessionId: string, slots: number[]): Promise<void> {
        const res = await fetch(this.url(`/sessions/${sessionId}/select`), {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ slots }),
        });
        if (!res.ok) await expect_json(res);
    }

    async nextGeneration(sessionId: string): Promise<number> {
        const res = await fetch(this.url(`/sessions/${sessionId}/next`), { method: "POST" });
        return (await expect_json<{ generation: number }>(res)).generation;
    }

    async publish(sessionId: string, slot: number, title: string,
                  author: string): Promise<PublishRecordDoc> {
        const res = await fetch(this.url(`/sessions/${sessionId}/publish`), {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ slot, title, author }),
        });
        return expect_json<PublishRecordDoc>(res);
    }

    async genome(imageId: string): Promise<GenomeDoc> {
        return expect_json<GenomeDoc>(await fetch(this.url(`/images/${imageId}/genome`)));
    }

    async sweep(imageId: string, connection: number, step = 0.1,
                size = 192): Promise<SweepView> {
        const query = `connection=${connection}&step=${step}&size=${size}`;
        return expect_json<SweepView>(
            await fetch(this.url(`/images/${imageId}/sweep?${query}`)));
    }

    async putLabels(imageId: string, labels: Record<string, LabelDoc>): Promise<LabelStoreDoc> {
        const res = await fetch(this.url(`/images/${imageId}/labels`), {
            method: "PUT",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ labels }),
        });
        return expect_json<LabelStoreDoc>(res);
    }

    async getLabels(imageId: string): Promise<LabelStoreDoc> {
        return expect_json<LabelStoreDoc>(
            await fetch(this.url(`/images/${imageId}/labels`)));
    }
}
