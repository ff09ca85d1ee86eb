import logging

import numpy as np
import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots

try:
    # When used as a package
    from ..integrators.state import Branch
except ImportError:
    # When used as standalone
    from erpic.integrators.state import Branch

logger = logging.getLogger(__name__)


class EnergyReport:
    def __init__(self, energy, H0, plot_title='', **run_info):
        """
        Energy conservation summary of one run.

        Parameters:
        - energy: pandas DataFrame with the energy.csv columns (step, time, H, relH_err, gamma, branch, discriminant)
        - H0: float, total energy of the initial state
        - plot_title: title for the plot
        - run_info: additional values echoed into the summary (scheme, regime, eps, dt, ...)
        """
        self.energy = energy
        self.H0 = H0
        self.plot_title = plot_title
        self.run_info = run_info
        self.summary_of_energy()

    def summary_of_energy(self):
        """
        Calculate the summary of the energy series
        """
        num_steps = self.energy.shape[0]

        # Handle case when no step was taken
        if num_steps == 0:
            self.energy_summary = {
                'number_of_steps': 0,
                'initial_H': self.H0,
                'final_H': self.H0,
                'max_relH_err': 0.0,
                'final_relH_err': 0.0,
                'real_root_steps': 0,
                'negative_discriminant_steps': 0,
                'degenerate_A_steps': 0,
                'real_root_ratio(%)': 0.0,
                'max_abs_gamma': 0.0,
                'final_time': 0.0,
            }
            self.energy_summary.update(self.run_info)
            self.energy_summary_plot_text = "No steps taken"
            return

        branch = self.energy['branch']
        real_root = int((branch == int(Branch.REAL_ROOT)).sum())
        self.energy_summary = {
            'number_of_steps': num_steps,
            'initial_H': self.H0,
            'final_H': float(self.energy['H'].iloc[-1]),
            'max_relH_err': float(self.energy['relH_err'].max()),
            'final_relH_err': float(self.energy['relH_err'].iloc[-1]),
            'real_root_steps': real_root,
            'negative_discriminant_steps': int((branch == int(Branch.NEGATIVE_DISCRIMINANT)).sum()),
            'degenerate_A_steps': int((branch == int(Branch.DEGENERATE_A)).sum()),
            'real_root_ratio(%)': round(real_root / num_steps * 100, 2),
            'max_abs_gamma': float(np.max(np.abs(self.energy['gamma']))),
            'final_time': float(self.energy['time'].iloc[-1]),
        }
        self.energy_summary.update(self.run_info)
        self.energy_summary_plot_text = f"Steps: {self.energy_summary['number_of_steps']}<br>"\
            f"Max rel. energy error: {self.energy_summary['max_relH_err']:.3e}<br>"\
            f"Final rel. energy error: {self.energy_summary['final_relH_err']:.3e}<br>"\
            f"Real-root steps: {self.energy_summary['real_root_ratio(%)']}%<br>"\
            f"Negative discriminant: {self.energy_summary['negative_discriminant_steps']}<br>"\
            f"Degenerate A: {self.energy_summary['degenerate_A_steps']}<br>"\
            f"Max |gamma|: {self.energy_summary['max_abs_gamma']:.3e}<br>"

    def show_energy(self, plot_height=800):
        """
        Plot the relative energy error and the relaxation parameter against time
        """
        edf = self.energy
        fig = make_subplots(rows=2, cols=1, shared_xaxes=True, vertical_spacing=0.08,
                            subplot_titles=['Relative energy error', 'Relaxation parameter'],
                            row_heights=[0.6, 0.4])
        fig.add_trace(go.Scatter(x=edf['time'], y=edf['relH_err'], line=dict(color='blue', width=2),
                                 name='relH_err'), row=1, col=1)
        fig.add_trace(go.Scatter(x=edf['time'], y=edf['gamma'], line=dict(color='green', width=1.5),
                                 name='gamma'), row=2, col=1)

        # mark steps where the relaxation fell back to gamma = 0
        fallback = edf.loc[edf['branch'] != int(Branch.REAL_ROOT)]
        if not fallback.empty:
            fig.add_trace(go.Scatter(x=fallback['time'], y=fallback['gamma'], mode='markers',
                                     marker=dict(symbol='x', size=8, color='red'), name='gamma = 0 fallback'),
                          row=2, col=1)

        fig.update_layout(showlegend=False, plot_bgcolor='white', height=plot_height, title=self.plot_title)
        for i in range(1, 3):
            fig.update_xaxes(mirror=True, ticks='outside', showline=True, linecolor='black',
                             gridcolor='lightgrey', row=i, col=1)
            fig.update_yaxes(mirror=True, ticks='outside', showline=True, linecolor='black',
                             gridcolor='lightgrey', row=i, col=1)
        fig.update_yaxes(type='log', row=1, col=1)

        fig.add_annotation(go.layout.Annotation(x=0.98, y=0.98, xref='paper', yref='paper',
                                                text=self.energy_summary_plot_text, showarrow=False,
                                                bordercolor='black', borderwidth=2, bgcolor='white',
                                                align='left', font=dict(size=12, color='black')))
        return fig

    def summary_frame(self):
        return pd.DataFrame(self.energy_summary, index=['Run summary']).T

    def summarize(self):
        """
        Log the summary of the run
        """
        logger.info(f"Run summary:\n{self.summary_frame().to_string()}")
        return self.energy_summary
