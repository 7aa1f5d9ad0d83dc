use std::cell::RefCell;
use std::collections::VecDeque;
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::Arc;
use std::thread::JoinHandle;

use netcore::{adam_step, ActorCritic, ParamSet};

use crate::env::Env;
use crate::iteration::GradProvider;
use crate::message::{decode_batch, encode_segment, Message, MsgTag};
use crate::segment::PooledBatch;
use crate::sync::epoch_permutation;
use crate::worker::Worker;
use crate::{Error, Result};

type Reply = (usize, std::result::Result<Message, String>);

/// Owns the worker replicas and dispatches the transport messages to them.
///
/// Logical workers are fixed at `worker_count`; the `max_threads` cap (the
/// `LOCORUN_THREADS` environment variable at the CLI) only controls how the
/// replicas execute: `1` runs them inline on the calling thread, larger
/// values multiplex them onto that many OS threads. Workers are always
/// served in worker-id order, so results are identical for any cap.
pub struct WorkerPool {
    worker_count: usize,
    backend: Backend,
}

enum Backend {
    Inline {
        cells: RefCell<(Vec<WorkerCell>, VecDeque<Reply>)>,
    },
    Threads {
        to_threads: Vec<Sender<Message>>,
        from_workers: Receiver<Reply>,
        handles: Vec<JoinHandle<()>>,
    },
}

impl WorkerPool {
    pub fn new(
        envs: Vec<Box<dyn Env>>,
        policy: &ActorCritic,
        initial_params: &ParamSet,
        provider: Arc<dyn GradProvider>,
        run_seed: u64,
        max_threads: usize,
    ) -> Result<Self> {
        let worker_count = envs.len();
        assert!(worker_count > 0, "need at least one worker");
        let threads = max_threads.max(1).min(worker_count);

        let mut workers: Vec<Worker> = envs
            .into_iter()
            .enumerate()
            .map(|(id, env)| Worker::new(id, env, policy.clone(), initial_params.clone(), run_seed))
            .collect();

        if threads == 1 {
            let cell = WorkerCell::new(workers, provider, run_seed, worker_count);
            return Ok(Self {
                worker_count,
                backend: Backend::Inline {
                    cells: RefCell::new((vec![cell], VecDeque::new())),
                },
            });
        }

        let per_thread = worker_count.div_ceil(threads);
        let (reply_tx, from_workers) = channel::<Reply>();
        let mut to_threads = Vec::new();
        let mut handles = Vec::new();
        while !workers.is_empty() {
            let chunk: Vec<Worker> = workers
                .drain(..per_thread.min(workers.len()))
                .collect();
            let (tx, rx) = channel::<Message>();
            to_threads.push(tx);
            let mut cell = WorkerCell::new(chunk, Arc::clone(&provider), run_seed, worker_count);
            let reply_tx = reply_tx.clone();
            handles.push(std::thread::spawn(move || {
                while let Ok(msg) = rx.recv() {
                    if msg.tag == MsgTag::Shutdown {
                        break;
                    }
                    let mut closed = false;
                    cell.handle(&msg, &mut |wid, reply| {
                        if reply_tx.send((wid, reply)).is_err() {
                            closed = true;
                        }
                    });
                    if closed {
                        break;
                    }
                }
            }));
        }

        Ok(Self {
            worker_count,
            backend: Backend::Threads {
                to_threads,
                from_workers,
                handles,
            },
        })
    }

    pub fn worker_count(&self) -> usize {
        self.worker_count
    }

    pub(crate) fn broadcast(&self, msg: &Message) -> Result<()> {
        match &self.backend {
            Backend::Inline { cells } => {
                let (cells, pending) = &mut *cells.borrow_mut();
                for cell in cells {
                    cell.handle(msg, &mut |wid, reply| pending.push_back((wid, reply)));
                }
                Ok(())
            }
            Backend::Threads { to_threads, .. } => {
                for tx in to_threads {
                    tx.send(msg.clone()).map_err(|_| Error::ChannelClosed)?;
                }
                Ok(())
            }
        }
    }

    /// Collects one reply per worker, ordered by worker id. Any worker fault
    /// aborts with its id attached.
    pub(crate) fn gather(&self, expect: MsgTag) -> Result<Vec<Message>> {
        let mut slots: Vec<Option<Message>> = vec![None; self.worker_count];
        for _ in 0..self.worker_count {
            let (worker_id, reply) = match &self.backend {
                Backend::Inline { cells } => cells
                    .borrow_mut()
                    .1
                    .pop_front()
                    .ok_or(Error::ChannelClosed)?,
                Backend::Threads { from_workers, .. } => {
                    from_workers.recv().map_err(|_| Error::ChannelClosed)?
                }
            };
            let msg = reply.map_err(|message| Error::WorkerFault { worker_id, message })?;
            if msg.tag != expect {
                return Err(Error::BadPayload(format!(
                    "expected {:?} reply, got {:?}",
                    expect, msg.tag
                )));
            }
            slots[worker_id] = Some(msg);
        }
        Ok(slots
            .into_iter()
            .map(|m| m.expect("one reply per worker"))
            .collect())
    }
}

impl Drop for WorkerPool {
    fn drop(&mut self) {
        if let Backend::Threads {
            to_threads,
            handles,
            ..
        } = &mut self.backend
        {
            for tx in to_threads.iter() {
                let _ = tx.send(Message::new(MsgTag::Shutdown, Vec::new()));
            }
            for handle in handles.drain(..) {
                let _ = handle.join();
            }
        }
    }
}

/// A group of workers plus the per-group transport state; both backends
/// dispatch through the same `handle`, which is what guarantees identical
/// results for every thread cap.
struct WorkerCell {
    workers: Vec<Worker>,
    provider: Arc<dyn GradProvider>,
    run_seed: u64,
    total_workers: usize,
    batch: Option<Arc<PooledBatch>>,
    perm_key: Option<(u64, u64)>,
    perm: Vec<usize>,
}

impl WorkerCell {
    fn new(
        workers: Vec<Worker>,
        provider: Arc<dyn GradProvider>,
        run_seed: u64,
        total_workers: usize,
    ) -> Self {
        Self {
            workers,
            provider,
            run_seed,
            total_workers,
            batch: None,
            perm_key: None,
            perm: Vec::new(),
        }
    }

    fn handle(&mut self, msg: &Message, reply: &mut dyn FnMut(usize, std::result::Result<Message, String>)) {
        match msg.tag {
            MsgTag::SetParams => {
                for w in &mut self.workers {
                    match w.params.with_values(msg.payload.clone()) {
                        Ok(p) => w.set_params(p),
                        Err(e) => reply(w.worker_id, Err(e.to_string())),
                    }
                }
            }
            MsgTag::Collect => {
                let len = msg.payload[0] as usize;
                for w in &mut self.workers {
                    let out = match w.collect_segment(len) {
                        Ok(seg) => {
                            let payload = encode_segment(
                                &seg,
                                seg.trajectory.observations[0].len(),
                                seg.trajectory.raw_actions[0].len(),
                            );
                            Ok(Message::new(MsgTag::Segment, payload))
                        }
                        Err(e) => Err(e.to_string()),
                    };
                    reply(w.worker_id, out);
                }
            }
            MsgTag::Batch => match decode_batch(&msg.payload) {
                Ok(batch) => {
                    self.batch = Some(Arc::new(batch));
                    self.perm_key = None;
                }
                Err(e) => {
                    let wid = self.workers.first().map(|w| w.worker_id).unwrap_or(0);
                    reply(wid, Err(e.to_string()));
                }
            },
            MsgTag::GradRequest => {
                let iteration = msg.payload[0] as u64;
                let epoch = msg.payload[1] as u64;
                let mb_index = msg.payload[2] as usize;
                let mb_size = msg.payload[3] as usize;
                let Some(batch) = self.batch.clone() else {
                    for w in &self.workers {
                        reply(w.worker_id, Err("no batch broadcast".into()));
                    }
                    return;
                };
                if self.perm_key != Some((iteration, epoch)) {
                    self.perm = epoch_permutation(self.run_seed, iteration, epoch, batch.len());
                    self.perm_key = Some((iteration, epoch));
                }
                let rows = &self.perm[mb_index * mb_size..(mb_index + 1) * mb_size];
                let shard = mb_size / self.total_workers;
                for w in &self.workers {
                    let shard_rows = &rows[w.worker_id * shard..(w.worker_id + 1) * shard];
                    let out = match self.provider.minibatch_grad(&w.params, &batch, shard_rows) {
                        Ok((grad, stats)) => {
                            let mut payload = Vec::with_capacity(1 + stats.len() + grad.len());
                            payload.push(stats.len() as f64);
                            payload.extend_from_slice(&stats);
                            payload.extend_from_slice(&grad);
                            Ok(Message::new(MsgTag::Grad, payload))
                        }
                        Err(message) => Err(message),
                    };
                    reply(w.worker_id, out);
                }
            }
            MsgTag::ApplyGrad => {
                let lr = msg.payload[0];
                let grad = &msg.payload[1..];
                for w in &mut self.workers {
                    match adam_step(&w.params, grad, &w.adam, lr) {
                        Ok((p, a)) => {
                            w.params = p;
                            w.adam = a;
                        }
                        Err(e) => reply(w.worker_id, Err(e.to_string())),
                    }
                }
            }
            MsgTag::ChecksumRequest => {
                for w in &self.workers {
                    let payload = vec![f64::from_bits(w.params.checksum())];
                    reply(w.worker_id, Ok(Message::new(MsgTag::Checksum, payload)));
                }
            }
            MsgTag::Shutdown | MsgTag::Segment | MsgTag::Grad | MsgTag::Checksum => {
                // Shutdown is consumed by the thread loop; the rest are
                // master-bound tags and never valid requests.
            }
        }
    }
}
